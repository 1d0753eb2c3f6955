"""Exact verification engine for finite symmetry computations on quartic K3 surfaces."""

__version__ = "0.1.0"
