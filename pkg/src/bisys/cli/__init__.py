"""Document formats, DOT emission, and the command-line front door."""
