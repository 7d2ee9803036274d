"""Test suite for the curved n-body package."""
