from pathlib import Path

import pytest

from planminer.log import parse_event_log
from planminer.miner import mine_tree
from planminer.synthlog import SyntheticLogSpec, generate_synthetic_log

DATA = Path(__file__).resolve().parent.parent / "data"

# duration ranges used by every synthetic-log test so durations stay stable
HUNDRED_RANGES = {"a": (2.0, 2.0), "b": (4.0, 4.0), "c": (3.5, 3.5),
                  "d": (1.5, 1.5), "e": (5.0, 5.0)}


@pytest.fixture(scope="session")
def table1_csv() -> str:
    return (DATA / "table1.csv").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def table1(table1_csv):
    return parse_event_log(table1_csv)


@pytest.fixture(scope="session")
def golden_tree(table1):
    return mine_tree(table1)


@pytest.fixture(scope="session")
def log100():
    spec = SyntheticLogSpec(activity_count=5, parallel_width=2,
                            variant_weights=(45, 53, 2), seed=7,
                            duration_ranges=HUNDRED_RANGES)
    return generate_synthetic_log(spec)
