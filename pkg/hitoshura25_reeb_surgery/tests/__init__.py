"""
Tests for reeb_surgery package.
"""
