"""
Unit Tests

This package contains unit tests for individual components and functions.
"""
