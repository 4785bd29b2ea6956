"""Concept-thread toolkit.

Turns a lecture video's timestamped transcript, per-frame visual
signatures and slide OCR layout into a hierarchical, temporal concept
map with four relation types and importance scores, serves it through
an editable HTTP API, and evaluates it against ground-truth labels.
"""

__version__ = "0.1.0"

PIPELINE_VERSION = __version__
