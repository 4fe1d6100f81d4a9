"""
Integration Tests

This package contains end-to-end tests of the simulation pipeline and the
command-line interface.
"""
