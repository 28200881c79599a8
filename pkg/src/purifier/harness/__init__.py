"""CLI, configuration, persistence and the ablation sweep."""
