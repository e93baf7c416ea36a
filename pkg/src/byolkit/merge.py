"""Weight-space model arithmetic over named-tensor checkpoints.

Merging forms  out = g_pt + alpha * (g_it - g_pt) + beta * (expert - g_pt)
elementwise; the one-dimensional slice alpha = 1 - lambda, beta = lambda
trades generalist instruction behavior against language expertise. All
arithmetic accumulates in float64 and stores back in the input dtype.
"""

import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import ContractViolation
from .tensorfile import (
    NamedTensor,
    NonFiniteTensorError,
    TensorCheckpoint,
    checkpoint_fingerprint,
    save_checkpoint,
)


@dataclass(frozen=True)
class MergeRecipe:
    alpha: float
    beta: float
    lam: Optional[float] = None

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ContractViolation(
                f"scaling coefficients must be >= 0, got alpha={self.alpha}, beta={self.beta}"
            )
        if self.lam is not None and abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ContractViolation("lambda form requires alpha + beta = 1")

    @classmethod
    def from_lambda(cls, lam):
        if not 0.0 <= lam <= 1.0:
            raise ContractViolation(f"lambda must be in [0, 1], got {lam}")
        return cls(alpha=1.0 - lam, beta=lam, lam=lam)

    def describe(self):
        fields = {"alpha": repr(self.alpha), "beta": repr(self.beta)}
        if self.lam is not None:
            fields["lambda"] = repr(self.lam)
        return fields


@dataclass(frozen=True)
class SweepSpec:
    lambdas: Sequence[float]
    name_pattern: str = "merged_lambda_{lam:g}.tns"

    def __post_init__(self):
        values = list(self.lambdas)
        if not values:
            raise ContractViolation("sweep requires at least one lambda")
        if any(not 0.0 <= v <= 1.0 for v in values):
            raise ContractViolation("sweep lambdas must lie in [0, 1]")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ContractViolation("sweep lambdas must be strictly increasing")


def _check_aligned(checkpoints, roles):
    name_sets = [ckpt.names() for ckpt in checkpoints]
    union = set().union(*name_sets)
    common = set(union)
    for names in name_sets:
        common &= names
    if common != union:
        missing = sorted(union - common)
        raise ContractViolation(
            f"checkpoint name sets differ; not shared by all inputs: {missing}"
        )
    for name in sorted(union):
        shapes = {ckpt.tensors[name].shape for ckpt in checkpoints}
        if len(shapes) != 1:
            raise ContractViolation(
                f"tensor {name!r}: shape mismatch across {roles}: {sorted(shapes)}"
            )
        dtypes = {ckpt.tensors[name].dtype for ckpt in checkpoints}
        if len(dtypes) != 1:
            raise ContractViolation(
                f"tensor {name!r}: dtype mismatch across {roles}: {sorted(dtypes)}"
            )


def merge(g_pt, g_it, expert, recipe: MergeRecipe) -> TensorCheckpoint:
    """Combine generalist-pretrained, generalist-instruct and expert weights."""
    _check_aligned([g_pt, g_it, expert], ("g_pt", "g_it", "expert"))
    tensors = {}
    for name in sorted(g_pt.tensors):
        base = g_pt.tensors[name].data.astype(np.float64)
        instruct = g_it.tensors[name].data.astype(np.float64)
        language = expert.tensors[name].data.astype(np.float64)
        combined = base + recipe.alpha * (instruct - base) + recipe.beta * (language - base)
        stored = combined.astype(g_pt.tensors[name].data.dtype)
        if not np.isfinite(stored).all():
            raise NonFiniteTensorError(f"tensor {name!r}: merge produced non-finite values")
        tensors[name] = NamedTensor(name, stored)
    metadata = {
        "role": "merged",
        "g_pt_fingerprint": checkpoint_fingerprint(g_pt),
        "g_it_fingerprint": checkpoint_fingerprint(g_it),
        "expert_fingerprint": checkpoint_fingerprint(expert),
    }
    metadata.update(recipe.describe())
    return TensorCheckpoint(tensors=tensors, metadata=metadata)


def lambda_merge(g_pt, g_it, expert, lam) -> TensorCheckpoint:
    """Merge on the alpha = 1 - lambda, beta = lambda slice.

    lambda 0 reproduces g_it and lambda 1 reproduces the expert, up to
    storage-dtype rounding.
    """
    return merge(g_pt, g_it, expert, MergeRecipe.from_lambda(lam))


def sweep(g_pt, g_it, expert, spec: SweepSpec, out_dir):
    """One merged checkpoint per lambda; returns the sweep manifest.

    A failure partway removes any files already written for this sweep.
    """
    os.makedirs(out_dir, exist_ok=True)
    manifest = []
    written = []
    try:
        for lam in spec.lambdas:
            merged = lambda_merge(g_pt, g_it, expert, lam)
            filename = spec.name_pattern.format(lam=lam)
            path = os.path.join(out_dir, filename)
            save_checkpoint(merged, path)
            written.append(path)
            manifest.append(
                {
                    "lambda": lam,
                    "file": filename,
                    "fingerprint": checkpoint_fingerprint(merged),
                }
            )
    except Exception:
        for path in written:
            try:
                os.remove(path)
            except OSError:
                pass
        raise
    return manifest


def average_checkpoints(ckpts: Sequence[TensorCheckpoint]) -> TensorCheckpoint:
    """Elementwise arithmetic mean of aligned checkpoints."""
    ckpts = list(ckpts)
    if not ckpts:
        raise ContractViolation("average_checkpoints requires at least one checkpoint")
    _check_aligned(ckpts, tuple(f"input {i}" for i in range(len(ckpts))))
    tensors = {}
    for name in sorted(ckpts[0].tensors):
        total = np.zeros(ckpts[0].tensors[name].shape, dtype=np.float64)
        for ckpt in ckpts:
            total += ckpt.tensors[name].data.astype(np.float64)
        stored = (total / len(ckpts)).astype(ckpts[0].tensors[name].data.dtype)
        if not np.isfinite(stored).all():
            raise NonFiniteTensorError(f"tensor {name!r}: average produced non-finite values")
        tensors[name] = NamedTensor(name, stored)
    metadata = {
        "role": "averaged",
        "input_count": str(len(ckpts)),
        "input_fingerprints": ",".join(checkpoint_fingerprint(c) for c in ckpts),
    }
    return TensorCheckpoint(tensors=tensors, metadata=metadata)
