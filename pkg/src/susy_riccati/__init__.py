"""SUSY Riccati - closed forms, Darboux families and Dirac-like systems with numerical checks."""

__version__ = "0.1.0"
__author__ = "SUSY Riccati"
__email__ = "support@example.com"
