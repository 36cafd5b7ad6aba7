import numpy as np
import pytest

from stinger.schema import CONTINUOUS, DEFAULT_SCHEMA, Dataset, FeatureSchema, FeatureSpec


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL/SKIP line per acceptance criterion."""
    if "test_acceptance" not in report.nodeid:
        return
    terminal = report.when == "call" or (report.when == "setup" and report.skipped)
    if not terminal:
        return
    status = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
    name = report.nodeid.split("::")[-1]
    print(f"\n[{status}] {name}", flush=True)


def make_dataset(X, y, schema=None, **kwargs):
    X = np.asarray(X, dtype=float)
    if schema is None:
        schema = FeatureSchema([FeatureSpec(f"x{i}", CONTINUOUS) for i in range(X.shape[1])])
    return Dataset(schema=schema, X=X, y=np.asarray(y, dtype=int), **kwargs)


def random_default_rows(n, seed=0, prevalence=0.3):
    """Plausible rows for the six default features with a class signal on SST
    and wind direction."""
    rng = np.random.default_rng(seed)
    y = (rng.random(n) < prevalence).astype(int)
    sst = rng.normal(21.0, 2.0, n) + 1.5 * y
    wind_dir = np.where(y == 1, rng.normal(0.0, 40.0, n), rng.normal(250.0, 50.0, n)) % 360
    wind_speed = np.abs(rng.normal(5.5, 2.5, n))
    curr_dir = rng.uniform(0, 360, n)
    curr_speed = np.abs(rng.normal(0.21, 0.15, n)) +1e-3
    month = rng.integers(1, 13, n).astype(float)
    X = np.column_stack([sst, wind_dir, wind_speed, curr_dir, curr_speed, month])
    return Dataset(schema=DEFAULT_SCHEMA, X=X, y=y)


@pytest.fixture
def default_dataset():
    return random_default_rows(400, seed=7)
