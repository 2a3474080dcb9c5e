"""Shared fixtures: loaders for the published reference quantile tables.

tests/data/reference_tables/<token>.csv holds the printed critical values
(four or five decimals) with their standard errors where the source
tabulation was simulated; exact entries have an empty stderr field.
"""

import csv
from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data" / "reference_tables"

METHOD_TOKENS = (
    "tippett", "fisher", "gm", "min-gm", "stouffer",
    "wilkinson", "edgington", "mg", "harmonic", "chen",
)


def load_reference(token):
    """-> {(n, n_f, q): (estimate, stderr_or_None)}"""
    table = {}
    with open(DATA_DIR / f"{token}.csv") as f:
        for row in csv.DictReader(f):
            key = (int(row["n"]), int(row["n_f"]), float(row["q"]))
            se = float(row["stderr"]) if row["stderr"] else None
            table[key] = (float(row["estimate"]), se)
    return table


@pytest.fixture(scope="session")
def reference_tables():
    return {token: load_reference(token) for token in METHOD_TOKENS}
