"""Command-line entry point (`pwsingleton`)."""
