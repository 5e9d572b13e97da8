"""Concave-cost matching, TSP and transport norms on the line."""
