"""Bundled synthetic journal specs used as demo data and test fixtures."""
