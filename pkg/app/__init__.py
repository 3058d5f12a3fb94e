"""Weak-value waveplate toolkit: transfer functions, generalized weak values and phase singularities."""

__version__ = "1.0.0"
