"""Small-height integral generators - Certified number field toolkit."""

__version__ = "1.0.0"
