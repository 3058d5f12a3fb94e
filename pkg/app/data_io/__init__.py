"""CSV formats, measured-sweep ingestion and exports."""
