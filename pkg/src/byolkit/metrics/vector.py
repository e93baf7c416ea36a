"""Embedding-vector similarity."""

import math

from ..errors import ContractViolation
from . import MetricScore, Scale


def cosine_similarity(a, b):
    """Cosine of the angle between two equal-dimension real vectors.

    Components are scaled by each vector's max magnitude before squaring,
    so denormal-range inputs neither underflow to a spurious zero norm nor
    overflow.
    """
    if len(a) != len(b):
        raise ContractViolation(f"dimension mismatch: {len(a)} vs {len(b)}")
    scale_a = max((abs(x) for x in a), default=0.0)
    scale_b = max((abs(y) for y in b), default=0.0)
    if scale_a == 0.0 or scale_b == 0.0:
        raise ContractViolation("cosine_similarity is undefined for a zero-norm vector")
    unit_a = [x / scale_a for x in a]
    unit_b = [y / scale_b for y in b]
    dot = math.fsum(x * y for x, y in zip(unit_a, unit_b))
    norm_a = math.sqrt(math.fsum(x * x for x in unit_a))
    norm_b = math.sqrt(math.fsum(y * y for y in unit_b))
    value = dot / (norm_a * norm_b)
    # clamp floating overshoot so downstream range checks stay exact
    value = max(-1.0, min(1.0, value))
    return MetricScore(value, Scale.SIGNED_UNIT)
