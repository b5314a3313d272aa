"""Reversible carry-save arithmetic circuits: builders, simulator, estimator."""
