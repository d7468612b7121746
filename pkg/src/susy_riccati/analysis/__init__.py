"""Closed-form objects, special functions and numerical oracles."""
