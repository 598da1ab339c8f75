"""Reinforcement-learning control toolkit for simulated self-healing materials."""

__version__ = "0.1.0"
