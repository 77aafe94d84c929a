"""Hardy spaces on the unit disk from subharmonic exhaustions."""

__version__ = "0.1.0"
