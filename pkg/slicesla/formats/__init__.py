"""File formats: YAML contracts and scenarios, CSV traces and curves, JSON reports."""
