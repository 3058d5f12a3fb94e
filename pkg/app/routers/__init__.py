"""API routers for the weak-value service."""
