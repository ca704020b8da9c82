"""Exact computation engine for the weighted largest-singleton statistic."""
