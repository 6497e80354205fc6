"""Tests for estimator components."""
