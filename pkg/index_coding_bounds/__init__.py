"""Inner and outer bounds for distributed index coding."""

__version__ = "1.0.0"
