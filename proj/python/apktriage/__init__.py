# SPDX-License-Identifier: Apache-2.0
"""Static triage of Android apps with a tiered agent pipeline.

Thin wrappers over the compiled ``_core`` module. Paths may be ``str`` or
``os.PathLike``; structured results come back as plain dicts.
"""

import json
import os
from pathlib import Path

from . import _core
from ._core import (
    ApktriageError,
    compute_metrics,
    method_locs,
    normalize_program,
    parse_bundle,
    percentile,
)

__all__ = [
    "ApktriageError",
    "analyze",
    "compute_metrics",
    "corpus_stats",
    "data_dir",
    "load_bundle",
    "method_locs",
    "normalize_program",
    "parse_bundle",
    "percentile",
    "run_batch",
]


def data_dir():
    """Catalogs, prompts and the default config: packaged copy first, then the source tree."""
    packaged = Path(__file__).resolve().parent / "data"
    if packaged.is_dir():
        return packaged
    return Path(_core.DEFAULT_DATA_DIR)


def load_bundle(bundle_dir):
    return _core.load_bundle(os.fspath(bundle_dir))


def analyze(bundle_dir, config=None, evidence=False):
    """Report, per-tier token counts and cost for one bundle directory."""
    text = _core.analyze(os.fspath(bundle_dir), os.fspath(data_dir()), os.fspath(config) if config else "", evidence)
    return json.loads(text)


def run_batch(dataset, out_dir, config=None, threads=None):
    """Run a dataset index, write reports under out_dir and return the confusion counts."""
    return _core.run_batch(
        os.fspath(dataset),
        os.fspath(out_dir),
        os.fspath(data_dir()),
        os.fspath(config) if config else "",
        -1 if threads is None else int(threads),
    )


def corpus_stats(dataset, width=10):
    """``stats`` output as a dict of the key/value lines (histogram excluded)."""
    out = {}
    for line in _core.corpus_stats(os.fspath(dataset), width).splitlines():
        parts = line.split()
        if len(parts) == 2 and parts[0] in ("apps", "skipped", "methods", "mean", "p50", "p80", "p90", "max"):
            out[parts[0]] = float(parts[1]) if parts[0] == "mean" else int(parts[1])
    return out
