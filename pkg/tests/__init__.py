"""
Tests for Primitive Forge.
"""
