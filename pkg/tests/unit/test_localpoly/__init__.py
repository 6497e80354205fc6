"""Tests for localpoly components."""
