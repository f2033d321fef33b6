import os
from pathlib import Path

import numpy as np
import pytest

from carsent.synth import PAPER_HISTOGRAM, make_sample_corpus

SMALL_HISTOGRAM = {5: 30, 4: 60, 3: 120, 2: 40, 1: 15}


@pytest.fixture(scope="session")
def small_csv(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("data") / "small.csv"
    make_sample_corpus(path, seed=7, histogram=SMALL_HISTOGRAM, non_relevant=6)
    return path


@pytest.fixture(scope="session")
def replica_csv(tmp_path_factory) -> Path:
    """Synthetic corpus with the published dataset's exact label histogram."""
    path = tmp_path_factory.mktemp("data") / "replica.csv"
    make_sample_corpus(path, seed=11)
    return path


@pytest.fixture(scope="session")
def paper_labels() -> np.ndarray:
    labels = []
    for label, count in sorted(PAPER_HISTOGRAM.items()):
        labels.extend([str(label)] * count)
    return np.array(labels, dtype=object)


def real_dataset_path() -> Path | None:
    """The published CSV, when the user has provided it."""
    env = os.environ.get("SDC_DATASET")
    if env and Path(env).exists():
        return Path(env)
    for candidate in sorted(Path(__file__).resolve().parent.parent.glob("data/*.csv")):
        return candidate
    return None


requires_real_dataset = pytest.mark.skipif(
    real_dataset_path() is None,
    reason="published dataset CSV not present; set SDC_DATASET or drop it in data/",
)


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if "test_acceptance" not in report.nodeid:
        return
    if report.when == "setup" and report.skipped:
        status = "SKIP"
    elif report.when == "call":
        status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    else:
        return
    name = report.nodeid.split("::")[-1]
    print(f"\nACCEPTANCE {name}: {status}")
