"""Gluing operators on formal series of colored uni-trivalent diagrams."""

__version__ = "0.1.0"
