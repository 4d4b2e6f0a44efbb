"""Packaged data files: default space configuration and report schema."""
