"""Two-prover 3-coloring proof games and their soundness machinery."""

__version__ = "0.1.0"
