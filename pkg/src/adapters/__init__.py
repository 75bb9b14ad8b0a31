"""Output adapters (CSV / JSON / run manifest)."""
