import datetime as dt
import os
import subprocess
import sys
from pathlib import Path

import pytest

from openindex.ids import EntityKind, OpenAlexId
from openindex.model import Institution
from openindex.concepts import load_concept_tree
from openindex.idnorm import IssnLinkingTable
from openindex.store import open_store

FIXTURES = Path(__file__).parent / "fixtures"

TODAY = dt.date(2026, 8, 25)


@pytest.fixture
def today() -> dt.date:
    return TODAY


@pytest.fixture
def store(tmp_path):
    with open_store(tmp_path / "store", create=True, today=TODAY) as handle:
        yield handle


@pytest.fixture(scope="session")
def issn_table() -> IssnLinkingTable:
    return IssnLinkingTable.load(FIXTURES / "issn_linking.csv")


@pytest.fixture(scope="session")
def toy_tree():
    return load_concept_tree(FIXTURES / "tree_toy.jsonl")


@pytest.fixture(scope="session")
def full_tree():
    return load_concept_tree(FIXTURES / "tree_full_shape.jsonl")


def seed_institutions(handle) -> dict[str, OpenAlexId]:
    """Load the 50-entry toy registry into a store; returns ror -> id."""
    import json

    out: dict[str, OpenAlexId] = {}
    with handle.transaction() as txn:
        with open(FIXTURES / "institutions_toy.jsonl", encoding="utf-8") as fh:
            for line in fh:
                row = json.loads(line)
                inst = Institution(
                    id=handle.mint(EntityKind.INSTITUTION),
                    ror=row["ror"],
                    display_name=row["display_name"],
                    aliases=row["aliases"],
                    country_code=row["country_code"],
                )
                txn.put(inst)
                out[row["ror"]] = inst.id
    return out


@pytest.fixture
def run_cli(tmp_path):
    """Invoke the installed CLI in a clean working directory.

    The clock is pinned so created/updated dates are reproducible, and
    the cwd is isolated so no ambient config file leaks in.
    """

    def run(*args: str, data_dir=None, env: dict | None = None, cwd=None):
        merged = os.environ.copy()
        merged["OPENINDEX_TODAY"] = TODAY.isoformat()
        if data_dir is not None:
            merged["OPENINDEX_DATA_DIR"] = str(data_dir)
        if env:
            merged.update(env)
        return subprocess.run(
            [sys.executable, "-m", "openindex.cli", *args],
            capture_output=True,
            text=True,
            env=merged,
            cwd=cwd or tmp_path,
        )

    return run
