"""Source package for the PDM oscillator toolkit."""
