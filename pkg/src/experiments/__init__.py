"""Experiments: equal-slope Landau-Zener sweeps and nonlinear STIRAP."""
