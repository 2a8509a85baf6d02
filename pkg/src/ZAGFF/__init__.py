"""Zero-average Gaussian free field toolkit."""

__version__ = "0.1.0"
