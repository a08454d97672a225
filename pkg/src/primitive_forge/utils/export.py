"""
JSON and CSV rendering of constructions, integrals and convergence tables.

Numbers are written with Python's shortest round-trip float repr, so JSON and
CSV carry identical values and files diff cleanly across platforms. Reading a
construction file back rebuilds a PiecewiseQuadratic that evaluates
bit-identically to the one that was written.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Sequence

from ..construction.antiderivative import (
    PiecewiseQuadratic,
    eval_Phi,
    from_segments,
    to_segments,
)
from ..engine import ConvergenceCertificate, LevelRow, error_bound_at
from ..errors import ConfigurationError

logger = logging.getLogger(__name__)

SEGMENT_FIELDS = ["lo", "hi", "a2", "a1", "a0", "value_lo"]
TABLE_FIELDS = [
    "level", "omega", "certified_omega", "error_bound", "gap", "integral", "change",
    "evaluations", "met",
]


def certificate_payload(cert: ConvergenceCertificate) -> Dict[str, Any]:
    """
    Certificate fields in export order.

    "omega" is the total oscillation estimated at the returned level;
    "certified_omega" is the running minimum the error bound is built from.
    The two differ only when the tolerance was not met.
    """
    return {
        "interval": [cert.a, cert.b],
        "level": cert.level,
        "omega": cert.level_omega,
        "certified_omega": cert.omega,
        "error_bound": cert.error_bound,
        "tolerance": cert.tolerance,
        "met": cert.met,
        "rigor": cert.rigor.kind.value,
        "lipschitz": cert.rigor.lipschitz,
        "status": cert.status,
        "evaluations": cert.evaluations,
    }


def construction_payload(
    pq: PiecewiseQuadratic,
    cert: ConvergenceCertificate,
    expression: str,
    points: Sequence[float] = (),
) -> Dict[str, Any]:
    """Segments + certificate (+ optional evaluations of Phi) as one mapping."""
    payload: Dict[str, Any] = {"expression": expression}
    payload.update(certificate_payload(cert))
    payload["integral"] = pq.total
    payload["segments"] = to_segments(pq)
    if points:
        payload["points"] = [
            {"x": x, "value": eval_Phi(pq, x), "error_bound": error_bound_at(cert, x)}
            for x in points
        ]
    return payload


def integral_payload(
    value: float, cert: ConvergenceCertificate, expression: str
) -> Dict[str, Any]:
    payload: Dict[str, Any] = {"expression": expression, "value": value}
    payload.update(certificate_payload(cert))
    return payload


def table_payload(rows: List[LevelRow], expression: str, a: float, b: float) -> Dict[str, Any]:
    return {
        "expression": expression,
        "interval": [a, b],
        "rows": [row.model_dump() for row in rows],
    }


def to_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False, allow_nan=False)


def _csv_text(fieldnames: List[str], rows: List[Dict[str, Any]], preamble: Dict[str, Any]) -> str:
    buffer = io.StringIO()
    for key, value in preamble.items():
        buffer.write(f"# {key}={json.dumps(value)}\n")
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if row.get(key) is None else row[key] for key in fieldnames})
    return buffer.getvalue()


def to_csv(payload: Dict[str, Any]) -> str:
    """
    Render a payload as CSV.

    Scalar metadata goes into leading "# key=value" lines; the segment, point
    or table rows form the CSV body.
    """
    preamble = {k: v for k, v in payload.items() if k not in ("segments", "points", "rows")}
    if "rows" in payload:
        return _csv_text(TABLE_FIELDS, payload["rows"], preamble)
    if "segments" in payload:
        text = _csv_text(SEGMENT_FIELDS, payload["segments"], preamble)
        if "points" in payload:
            text += "\n" + _csv_text(["x", "value", "error_bound"], payload["points"], {})
        return text
    return _csv_text(list(preamble.keys()), [preamble], {})


def render(payload: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return to_json(payload)
    if fmt == "csv":
        return to_csv(payload)
    raise ConfigurationError(f"Unsupported output format: {fmt}")


def write_output(text: str, out: Path) -> None:
    """
    Write UTF-8 text, newline-terminated, to a file.

    Raises:
        ConfigurationError: If the file cannot be written
    """
    if not text.endswith("\n"):
        text += "\n"
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot write output to {out}: {e}") from e
    logger.info(f"Wrote {out}")


def load_construction(path: Path) -> PiecewiseQuadratic:
    """
    Read a JSON construction file back into a PiecewiseQuadratic.

    Raises:
        ConfigurationError: If the file is not a construction export
    """
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
        a, b = data["interval"]
        return from_segments(a, b, data["level"], data["segments"], data["integral"])
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise ConfigurationError(f"Cannot read construction from {path}: {e}") from e
