"""Repository layer: cached access to states and measure reports."""
