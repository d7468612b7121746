"""Test suite for SUSY Riccati."""
