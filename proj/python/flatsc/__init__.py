"""Saddle connection graphs of flat surfaces, exact arithmetic in Q(sqrt d)."""

from ._core import FlatscError, Surface, run

__all__ = ["FlatscError", "Surface", "run"]
