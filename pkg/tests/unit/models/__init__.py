"""
Unit Tests for Data Models

This package contains unit tests for data models.
"""
