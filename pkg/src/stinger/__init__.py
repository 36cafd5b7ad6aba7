"""Marine-stinger beaching prediction toolkit.

Mixed-type tabular ingestion, imbalance-aware augmentation (SMOTE-NC, random
undersampling, synthetic-negative generation), natively implemented
classifiers, an evaluation harness, and PCA/correlation diagnostics, behind
the ``stinger`` command-line tool.
"""

__version__ = "0.1.0"
