"""Comment-edit pair mining, evaluation, and analytics for answer edit histories."""

__version__ = "0.1.0"
