"""Test suite for brownthompson."""
