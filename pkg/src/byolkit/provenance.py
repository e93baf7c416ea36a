"""Run reproducibility helpers: fingerprints, seed fan-out, manifests.

One global seed fans out to per-stage seeds by hashing (seed, stage name),
so every stage is locally reproducible without coupling to the others.
Manifests are deterministic (no timestamps); wall-clock data belongs to
the structured log stream instead.
"""

import hashlib
import json
import platform

import numpy

from . import __version__


def stage_seed(global_seed: int, stage: str) -> int:
    digest = hashlib.blake2b(f"{global_seed}:{stage}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def config_fingerprint(payload) -> str:
    canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_manifest(subcommand: str, config_payload, seed: int) -> dict:
    return {
        "subcommand": subcommand,
        "config_fingerprint": config_fingerprint(config_payload),
        "seed": seed,
        "versions": {
            "byolkit": __version__,
            "python": platform.python_version(),
            "numpy": numpy.__version__,
        },
    }


def write_manifest(path, manifest):
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, sort_keys=True, indent=2)
        handle.write("\n")
