"""Data Transfer Objects for API responses."""
