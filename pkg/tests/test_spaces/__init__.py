"""Tests for spaces module."""
