"""Dual-chamber fast-light Fabry-Perot interferometer simulator."""

__version__ = "0.1.0"
