"""Command-line front end: argument parsing, input loading and report assembly."""
