"""Utility modules for brownthompson."""
