"""
Unit Tests for Utility Functions

This package contains unit tests for utility functions.
"""
