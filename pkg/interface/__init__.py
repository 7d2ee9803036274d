"""Interface layer for the command line."""
