"""Summary lines collected by the acceptance tests."""

LINES = []
