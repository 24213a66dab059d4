"""Tests for sharpness module."""
