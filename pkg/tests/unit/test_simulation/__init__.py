"""Tests for simulation components."""
