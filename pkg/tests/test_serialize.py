import numpy as np
import pytest

from pdoracle.errors import FormatError
from pdoracle.harness import BruteOracle, check_equivalence, gen_grid, \
    gen_random_planar
from pdoracle.oracle_simple import build_oracle
from pdoracle.oracle_tradeoff import build_tradeoff_oracle
from pdoracle.serialize import dump_oracle, load_oracle


def roundtrip_and_check(g, oracle):
    blob = dump_oracle(oracle)
    loaded = load_oracle(blob)
    assert dump_oracle(loaded) == blob
    rep = check_equivalence(loaded, BruteOracle(g), ("sample", 300), seed=3)
    assert rep["mismatch_count"] == 0
    return blob


def test_simple_roundtrip():
    g = gen_random_planar(120, seed=2, max_len=60)
    o = build_oracle(g)
    blob = roundtrip_and_check(g, o)
    # identical rebuilds serialize identically
    blob2 = dump_oracle(build_oracle(g))
    assert blob2 == blob


def test_tradeoff_roundtrip():
    g = gen_grid(8, mode="uniform", seed=4)
    o = build_tradeoff_oracle(g, 8)
    blob = roundtrip_and_check(g, o)
    assert dump_oracle(build_tradeoff_oracle(g, 8)) == blob


def test_loaded_matches_in_memory():
    g = gen_random_planar(90, seed=6, max_len=25)
    o = build_oracle(g)
    loaded = load_oracle(dump_oracle(o))
    for u in range(0, 90, 7):
        for v in range(0, 90, 11):
            assert o.query(u, v) == loaded.query(u, v)
    assert o.space_report() == loaded.space_report()


def test_bad_container():
    with pytest.raises(FormatError):
        load_oracle(b"nope")
    g = gen_grid(4)
    blob = dump_oracle(build_oracle(g))
    with pytest.raises(FormatError):
        load_oracle(blob[:4] + b"\x09" + blob[5:])  # version bump
    with pytest.raises(FormatError):
        load_oracle(blob + b"x")
