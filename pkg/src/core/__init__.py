"""
Core package: model, stationary states, continuation, dynamics, sweep runner
"""
