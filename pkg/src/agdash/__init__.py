"""Alert-driven attack graph analytics.

Compresses intrusion alerts into episode sequences and de-duplicated attack
graphs, scores attack stages by urgency, and serves graph / timeline / matrix
views over an HTTP API and CLI.
"""

__version__ = "0.1.0"
