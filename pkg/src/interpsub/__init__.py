"""Interpolatory subdivision symbols derived from approximating ones."""
