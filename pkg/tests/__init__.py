"""Tests package for the PDM oscillator toolkit."""
