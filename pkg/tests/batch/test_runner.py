"""
Tests for the replicate runner.

Run with: python -m pytest tests/batch/test_runner.py
"""

import threading

import pytest

from ZAGFF.core.exceptions import ValidationError
from ZAGFF.core.settings import settings
from ZAGFF.services.batch import ReplicateRunner, block_sizes


def test_block_sizes():
    assert block_sizes(10, 4) == [4, 4, 2]
    assert block_sizes(8, 4) == [4, 4]
    assert block_sizes(0, 4) == []


def test_block_sizes_rejects_bad_input():
    with pytest.raises(ValidationError):
        block_sizes(10, 0)


def test_serial_results_in_index_order():
    assert ReplicateRunner(workers=1).run(5, lambda i: i * i) == [0, 1, 4, 9, 16]


def test_pooled_results_in_index_order(threads):
    runner = ReplicateRunner(workers=threads, chunk_size=7)
    assert runner.workers == 4
    assert runner.run(50, lambda i: i) == list(range(50))


def test_pool_really_uses_threads(threads):
    seen = set()

    def task(i):
        seen.add(threading.current_thread().name)
        return i

    ReplicateRunner(workers=threads, chunk_size=64, label="sweep").run(64, task)
    assert all(name.startswith("sweep") for name in seen)


def test_workers_capped_by_setting(monkeypatch):
    monkeypatch.setattr(settings, "threads", 1)
    assert ReplicateRunner(workers=8).workers == 1


def test_first_failure_propagates(threads):
    def task(i):
        if i == 3:
            raise RuntimeError("boom")
        return i

    with pytest.raises(RuntimeError, match="boom"):
        ReplicateRunner(workers=threads).run(10, task)


def test_count_must_be_positive():
    with pytest.raises(ValidationError):
        ReplicateRunner().run(0, lambda i: i)
