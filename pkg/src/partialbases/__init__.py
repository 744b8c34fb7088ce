"""Whitehead automorphisms, partial bases of free groups and finite poset topology."""

__version__ = "0.1.0"
