"""Label cover to vertex-connectivity reductions, with exact small-instance oracles."""

__version__ = "0.1.0"
