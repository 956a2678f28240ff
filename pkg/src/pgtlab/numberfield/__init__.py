"""Totally real cubic fields and their unit groups."""
