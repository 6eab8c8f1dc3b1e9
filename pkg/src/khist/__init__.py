"""Categorical clustering with histogram cluster summaries (k-histograms),
the k-modes baseline, and frequency-threshold variants between the two."""
