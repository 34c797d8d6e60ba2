"""Exact and Monte Carlo laboratory for AR(1) persistence probabilities.

The package computes the probability that an order-one autoregressive path
Y_n = theta*Y_{n-1} + X_n stays nonnegative, by three independent routes:
closed-form polynomial families, an exact piecewise-polynomial density
oracle, and seedable Monte Carlo simulation.  A floating-point layer covers
decay rates, limits and q-series, all tied back to the exact values.
"""

__version__ = "0.1.0"
