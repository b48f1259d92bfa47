"""volteq: seeded system-level simulator of an indoor small-cell cluster in
which a tabular Q-learning agent runs VoLTE downlink closed-loop power
control against injected network faults, benchmarked against fixed power
allocation via retainability and MOS.
"""

__version__ = "0.1.0"
