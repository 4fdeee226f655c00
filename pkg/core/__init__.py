"""Core package: exceptions, caching, rendering and shared helpers for tdlab."""
