"""Coalitional game solvers and formation dynamics."""
