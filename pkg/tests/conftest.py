from __future__ import annotations

import pytest

from citemetrics import synth
from citemetrics.ledger import CellCount, CitationProfile


@pytest.fixture(scope="session")
def hare():
    spec = synth.fixture_spec("hare")
    profile, pubs = synth.generate_profile(spec)
    return spec, profile, pubs


@pytest.fixture(scope="session")
def tortoise():
    spec = synth.fixture_spec("tortoise")
    profile, pubs = synth.generate_profile(spec)
    return spec, profile, pubs


def make_profile(journal, cells):
    """Profile from {(cited_year, citing_year): (total, self)} pairs."""
    return CitationProfile(
        journal, {key: CellCount(total, self_count) for key, (total, self_count) in cells.items()}
    )
