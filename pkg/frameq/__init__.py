"""Frame constructions, coefficient quantizers and bound experiments."""

__version__ = "0.1.0"
