"""A configurable proof-checker kernel for pure type systems with inductive
types, with a corpus of paradox encodings checked under several profiles."""

import sys

# terms in the corpus are deep; the checker recurses on their structure
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)

__version__ = "0.1.0"
