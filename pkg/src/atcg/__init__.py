"""Design-model to predicate/transition-net compiler and test generator."""

__version__ = "0.1.0"
