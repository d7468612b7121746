"""Command-line surface: runs, verification suites and report writers."""
