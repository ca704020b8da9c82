"""Identity registry and grid suite runner."""
