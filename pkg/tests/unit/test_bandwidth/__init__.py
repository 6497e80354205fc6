"""Tests for bandwidth components."""
