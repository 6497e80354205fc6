"""Tests for geometry components."""
