"""ksflow - pseudo-spectral Keller-Segel-fluid simulator with a diagnostics suite."""

__version__ = "0.1.0"
