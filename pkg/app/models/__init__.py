"""Data models for the weak-value toolkit."""
