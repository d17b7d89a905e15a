"""Shared fixtures: benchmark data files and prepared bundles.

Benchmark-shaped data is resolved in this order:

1. ``$NNPRUNE_DATA_DIR/<canonical filename>`` when the variable is set,
2. ``<repo root>/data/<canonical filename>`` when present,
3. a deterministic stand-in file generated into the session tmp dir.

The resolved source ("real" or "synthetic") is echoed once per session so
it is always visible which data a run used.
"""

from __future__ import annotations

import os
from pathlib import Path

import pytest

from nnprune import CANCER1, DIABETES, GLASS, load_bundle
from nnprune.synth import FILENAMES, write_benchmark

_REPO_DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(scope="session")
def benchmark_files(tmp_path_factory) -> dict[str, tuple[Path, str]]:
    """Map dataset name -> (path, source) for all three benchmarks."""
    out: dict[str, tuple[Path, str]] = {}
    synth_dir = tmp_path_factory.mktemp("benchmark-data")
    for name, filename in FILENAMES.items():
        env_dir = os.environ.get("NNPRUNE_DATA_DIR")
        candidates = []
        if env_dir:
            candidates.append(Path(env_dir) / filename)
        candidates.append(_REPO_DATA / filename)
        real = next((p for p in candidates if p.is_file()), None)
        if real is not None:
            out[name] = (real, "real")
        else:
            out[name] = (write_benchmark(name, synth_dir / filename), "synthetic")
    sources = {name: src for name, (_, src) in out.items()}
    print(f"\n[benchmark data sources: {sources}]")
    return out


@pytest.fixture(scope="session")
def cancer_file(benchmark_files) -> Path:
    return benchmark_files["cancer1"][0]


@pytest.fixture(scope="session")
def glass_file(benchmark_files) -> Path:
    return benchmark_files["glass"][0]


@pytest.fixture(scope="session")
def diabetes_file(benchmark_files) -> Path:
    return benchmark_files["diabetes"][0]


@pytest.fixture(scope="session")
def cancer_bundle(cancer_file):
    return load_bundle(cancer_file, CANCER1, split_seed=1)


@pytest.fixture(scope="session")
def glass_bundle(glass_file):
    return load_bundle(glass_file, GLASS, split_seed=1)


@pytest.fixture(scope="session")
def diabetes_bundle(diabetes_file):
    return load_bundle(diabetes_file, DIABETES, split_seed=1)
