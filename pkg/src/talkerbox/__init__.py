"""Ensemble conversational engine.

A set of independent reply generators ("talkers") each propose a candidate
answer with a confidence score; a small arbitration engine calibrates those
scores, runs a follow-up round where talkers can react to the ranked
proposals, filters for safety, and picks the winner.
"""

__version__ = "0.1.0"
