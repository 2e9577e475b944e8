"""Tests for VibeDialer."""
