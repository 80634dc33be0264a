"""Exact verification of prism-side lemmas and explicit ramification bounds."""

__version__ = "0.1.0"
