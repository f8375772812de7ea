"""Topological entanglement entropy diagnostics for loop-gas models built from premodular categories."""
__version__ = "0.1.0"
