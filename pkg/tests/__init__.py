"""Tests for mini-gpopt"""
