"""mfscan: multifractal analysis of return series."""

__version__ = "0.1.0"
