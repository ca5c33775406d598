"""Workbench for checking belief-update and belief-revision postulates on
finite Kripke frames with Lewis-style selection functions."""

__version__ = "0.1.0"
