"""Core module for exceptions, vector helpers and logging."""
