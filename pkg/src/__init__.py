"""tripwell: nonlinear three-level condensate (triple well) toolkit."""
