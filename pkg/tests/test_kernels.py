"""Both GF(2) kernel lanes against the dense reference, and against each
other when the compiled lane is present."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from covtrack import _gf2pure, kernels
from conftest import flag_triangles


def dense_rank_of_columns(columns, width):
    m = np.zeros((len(columns), width), dtype=np.uint8)
    for i, col in enumerate(columns):
        for b in col:
            m[i, b] = 1
    return oracles.gf2_rank(m)


@given(st.lists(st.integers(0, 300), min_size=0, max_size=40))
def test_pivot_table_rank_matches_dense(values):
    table = _gf2pure.PivotTable()
    for v in values:
        table.insert(v)
    width = 310
    m = np.zeros((len(values), width), dtype=np.uint8)
    for i, v in enumerate(values):
        for b in range(width):
            m[i, b] = (v >> b) & 1
    assert table.rank == oracles.gf2_rank(m)


@given(st.lists(st.integers(1, 1 << 40), min_size=1, max_size=30),
       st.integers(0, 1 << 40))
def test_pivot_table_membership(values, probe):
    table = _gf2pure.PivotTable()
    for v in values:
        table.insert(v)
    # A random XOR-combination of inserted vectors must reduce to zero.
    rng = random.Random(probe)
    combo = 0
    for v in values:
        if rng.random() < 0.5:
            combo ^= v
    assert table.reduce(combo) == 0


def random_triangle_columns(rng, n_edges, n_cols):
    cols = []
    for _ in range(n_cols):
        bits = rng.sample(range(n_edges), 3)
        cols.append(tuple(sorted(bits)))
    return cols


@pytest.mark.parametrize("seed", range(6))
def test_build_d2_basis_rank_matches_dense(seed):
    rng = random.Random(seed)
    n_edges = rng.randint(6, 40)
    cols = random_triangle_columns(rng, n_edges, rng.randint(0, 50))
    basis = kernels.build_d2_basis(cols, n_edges)
    assert basis.rank == dense_rank_of_columns(cols, n_edges)


@pytest.mark.parametrize("seed", range(6))
def test_build_d2_basis_ceiling_saturation(seed):
    rng = random.Random(100 + seed)
    n_edges = rng.randint(6, 30)
    cols = random_triangle_columns(rng, n_edges, 40)
    full_rank = dense_rank_of_columns(cols, n_edges)
    if full_rank == 0:
        return
    ceiling = rng.randint(1, full_rank)
    basis = kernels.build_d2_basis(cols, n_edges, ceiling=ceiling)
    if basis.saturated:
        assert full_rank >= ceiling
        assert basis.rank == ceiling
    else:
        assert basis.rank == full_rank < ceiling


def geometric_edges(seed, n, radius):
    rng = random.Random(seed)
    pts = [(rng.random(), rng.random()) for _ in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            dx = pts[i][0] - pts[j][0]
            dy = pts[i][1] - pts[j][1]
            if dx * dx + dy * dy <= radius * radius:
                edges.append((i + 1, j + 1))
    return edges


@pytest.mark.parametrize("seed", range(5))
def test_flag_basis_matches_dense(seed):
    n = 25
    edges = geometric_edges(seed, n, 0.35)
    eix = {e: i for i, e in enumerate(sorted(edges))}
    tris = flag_triangles(edges)
    cols = [tuple(sorted((eix[(u, v)], eix[(u, w)], eix[(v, w)])))
            for u, v, w in tris]
    expect = dense_rank_of_columns(cols, len(edges))
    basis = _gf2pure.flag_d2_basis(n, sorted(edges))
    assert basis.rank == expect
    if kernels.COMPILED:
        compiled = kernels.flag_d2_basis(n, sorted(edges))
        assert compiled.rank == expect


@pytest.mark.parametrize("seed", range(5))
def test_lanes_agree_with_ceiling(seed):
    if not kernels.COMPILED:
        pytest.skip("compiled lane not built")
    n = 20
    edges = geometric_edges(200 + seed, n, 0.4)
    for ceiling in (None, 1, 3, 10):
        pure = _gf2pure.flag_d2_basis(n, sorted(edges), ceiling=ceiling)
        comp = kernels.flag_d2_basis(n, sorted(edges), ceiling=ceiling)
        assert (pure.rank, pure.saturated) == (comp.rank, comp.saturated)


def test_reduces_to_zero_on_boundary_sums():
    # Sums of inserted columns reduce to zero; fresh unit vectors must not.
    rng = random.Random(31)
    n_edges = 20
    cols = random_triangle_columns(rng, n_edges, 15)
    basis = kernels.build_d2_basis(cols, n_edges)
    vec = 0
    for col in cols:
        if rng.random() < 0.5:
            for b in col:
                vec ^= 1 << b
    assert basis.reduces_to_zero(vec)
    m = np.zeros((len(cols), n_edges), dtype=np.uint8)
    for i, col in enumerate(cols):
        for b in col:
            m[i, b] = 1
    for bit in range(n_edges):
        probe = np.zeros(n_edges, dtype=np.uint8)
        probe[bit] = 1
        in_span = oracles.gf2_rank(np.vstack([m, probe])) == oracles.gf2_rank(m)
        assert basis.reduces_to_zero(1 << bit) == in_span


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6))
def test_flag_triangle_enumeration_matches_triple_loop(seed):
    edges = sorted(geometric_edges(seed, 12, 0.5))
    eix = {e: i for i, e in enumerate(edges)}
    expect = {frozenset((eix[(u, v)], eix[(u, w)], eix[(v, w)]))
              for u, v, w in flag_triangles(edges)}
    got = [frozenset(t) for t in _gf2pure.flag_triangles(12, edges)]
    assert len(got) == len(expect)
    assert set(got) == expect
