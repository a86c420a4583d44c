"""Connected strongly-proportional cake cutting with exact Robertson-Webb accounting."""

__version__ = "0.1.0"
