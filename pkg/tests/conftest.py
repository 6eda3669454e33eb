import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from usecase import GAP_SECONDS, MERGE_MIN_COUNT, usecase_bytes

from agdash.pipeline import AnalysisOptions, analyze_bytes
from agdash.store import Store


@pytest.fixture
def store(tmp_path) -> Store:
    return Store(tmp_path / "test.db")


@pytest.fixture(scope="session")
def usecase_store(tmp_path_factory) -> Store:
    """The bundled scenario, analyzed once for the whole session."""
    store = Store(tmp_path_factory.mktemp("usecase") / "usecase.db")
    analyze_bytes(
        usecase_bytes(),
        "usecase_alerts.json",
        store,
        AnalysisOptions(gap_threshold=GAP_SECONDS, merge_min_count=MERGE_MIN_COUNT),
    )
    return store


@pytest.fixture(scope="session")
def usecase_run_id(usecase_store) -> str:
    return usecase_store.list_runs()[0].run_id


@pytest.fixture(scope="session")
def usecase_snapshot(usecase_store, usecase_run_id):
    return usecase_store.load_analysis(usecase_run_id)
