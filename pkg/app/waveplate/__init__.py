"""Waveplate unitary family and transfer function."""
