"""
Shared fixtures for the toolkit tests.

Run with: python -m pytest tests            (everything)
          python -m pytest tests -m "not slow"  (skip desk-scale Monte Carlo runs)
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from ZAGFF.core.settings import settings
from ZAGFF.services.extremes import normalizing_constants
from ZAGFF.services.greens import lattice_green_origin
from ZAGFF.services.lattice import FieldConfig
from ZAGFF.services.sampler import SeedPolicy, make_generator


@pytest.fixture
def cfg3() -> FieldConfig:
    return FieldConfig(d=3, n=3)


@pytest.fixture
def cfg4() -> FieldConfig:
    return FieldConfig(d=3, n=4)


@pytest.fixture
def cfg8() -> FieldConfig:
    return FieldConfig(d=3, n=8)


@pytest.fixture
def policy() -> SeedPolicy:
    return SeedPolicy(master_seed=20240611)


@pytest.fixture
def rng():
    return make_generator(12345)


@pytest.fixture
def constants8(cfg8):
    return normalizing_constants(cfg8.N, lattice_green_origin(3))


@pytest.fixture
def threads(monkeypatch):
    """Allow up to four replicate workers for the duration of a test."""
    monkeypatch.setattr(settings, "threads", 4)
    return 4


@pytest.fixture
def out_dir(tmp_path) -> Path:
    return tmp_path / "run"
