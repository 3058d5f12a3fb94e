"""Generalized weak values: operator form, response gradients, closed forms."""
