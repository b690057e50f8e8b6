"""Tests for ksflow."""
