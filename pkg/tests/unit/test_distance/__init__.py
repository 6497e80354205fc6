"""Tests for distance components."""
