"""
Unit Tests for Subcommand Handlers

This package contains unit tests for the CLI subcommand handlers.
"""
