"""Tests for operators module."""
