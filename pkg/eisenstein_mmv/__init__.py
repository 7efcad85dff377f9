"""Multiple Eisenstein L-series, iterated Eisenstein integrals and their
length-two multiple modular values."""

__version__ = "0.1.0"
