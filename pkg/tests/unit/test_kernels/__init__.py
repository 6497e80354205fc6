"""Tests for kernels components."""
