"""
Test Suite for the crossbar laser-fault simulator

Tests are organized into unit tests and integration tests.
"""
