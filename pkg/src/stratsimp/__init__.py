"""Computations with finite stratified simplicial sets over finite posets."""

__version__ = "0.1.0"
