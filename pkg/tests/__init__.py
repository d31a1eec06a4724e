"""Test package for rollscan."""
