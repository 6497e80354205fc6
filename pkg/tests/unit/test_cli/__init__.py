"""Tests for cli components."""
