"""Toolkit for bringing low-resource languages into LLM workflows.

Subpackages cover the deterministic stages of the pipeline: resource-tier
classification (`atlas`), translation fidelity metrics (`metrics`),
round-trip translation evaluation (`rtt`), bitext filtering/augmentation/
mixing (`refinery`), sentence-alignment validation (`align`), weight-space
model merging (`merge` / `tensorfile`), benchmark score aggregation
(`aggregate`), translation backends (`backends`), and a CLI (`cli`).
"""

__version__ = "0.1.0"
