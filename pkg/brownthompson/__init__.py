"""brownthompson: word rewriting, tree diagrams and moment enumeration for Brown-Thompson groups F_p."""

__version__ = "0.1.0"
__author__ = "brownthompson Team"
__description__ = "Normal forms, oriented subgroup tests and exact moment counts for F_p"
