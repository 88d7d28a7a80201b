"""Bundled example corpus (JSON)."""
