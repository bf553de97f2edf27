"""Self-similar actions on finite higher-rank graphs: combinatorics, groupoid
bisections, classification checks and the generated *-algebra."""

__version__ = "0.1.0"
