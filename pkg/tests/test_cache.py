import logging
import threading
from fractions import Fraction as Fr

import numpy as np

import fatcantor.cache as cache_mod
from fatcantor.cache import TableCache, cache_lookup
from fatcantor.cantor_set import CantorParams
from fatcantor.riesz_coeffs import table

P = CantorParams(Fr(3, 4))


def test_round_trip_bit_identical(tmp_path):
    c = TableCache(tmp_path)
    t = table(P, 4095)
    c.store(t)
    back = c.lookup(P, 4095, 1e-12)
    assert back.values.tobytes() == t.values.tobytes()
    assert (back.J, back.err_bound, back.gamma) == (t.J, t.err_bound, t.gamma)
    assert cache_lookup(tmp_path, "3/4", 4095, 1e-12) is not None


def test_key_discipline(tmp_path):
    c = TableCache(tmp_path)
    c.store(table(P, 100, 1e-12))
    assert c.lookup(P, 100, 1e-10) is None
    assert c.lookup(P, 99, 1e-12) is None
    assert c.lookup(CantorParams(Fr(1, 4)), 100, 1e-12) is None


def test_get_counts_hits_and_misses(tmp_path):
    c = TableCache(tmp_path)
    a = c.get(P, 50, 1e-12)
    b = c.get(P, 50, 1e-12)
    assert (c.misses, c.hits) == (1, 1)
    assert np.array_equal(a.values, b.values)


def test_corrupt_file_is_a_miss(tmp_path, caplog):
    c = TableCache(tmp_path)
    c.path(P.gamma, 10, 1e-12).write_bytes(b"not a table")
    with caplog.at_level(logging.WARNING):
        assert c.lookup(P, 10, 1e-12) is None
    assert "corrupt" in caplog.text
    t = c.get(P, 10, 1e-12)
    assert np.array_equal(t.values, table(P, 10).values)
    assert c.lookup(P, 10, 1e-12) is not None


def test_header_mismatch_is_a_miss(tmp_path):
    c = TableCache(tmp_path)
    c.store(table(P, 10))
    # a file for another key renamed into this slot
    other = TableCache(tmp_path / "x")
    path = other.store(table(CantorParams(Fr(1, 4)), 10))
    path.replace(c.path(P.gamma, 10, 1e-12))
    assert c.lookup(P, 10, 1e-12) is None


def test_concurrent_get_computes_once(tmp_path, monkeypatch):
    calls = []
    real = cache_mod.table

    def counting(*args, **kwargs):
        calls.append(1)
        return real(*args, **kwargs)

    monkeypatch.setattr(cache_mod, "table", counting)
    c = TableCache(tmp_path)
    barrier = threading.Barrier(8)
    out = [None] * 8

    def worker(i):
        barrier.wait()
        out[i] = c.get(P, 2000, 1e-12).values.tobytes()

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(calls) == 1
    assert len(set(out)) == 1
    assert c.misses == 1 and c.hits == 7
