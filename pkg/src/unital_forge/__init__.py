"""Exact constructions and checks for hermitian unitals over fields and quaternions."""

__version__ = "0.1.0"
