"""Tests for uncertainty module."""
