"""
Wave-particle duality information measures and relation verifier.
"""

__version__ = "1.0.0"
__author__ = "Quantum Complementarity Team"
