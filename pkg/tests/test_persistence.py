import math

import numpy as np
import pytest

from oracles import bottleneck, brute_betti, components, random_metricish
from socioplex.complex import Filtration, build_filtration
from socioplex.errors import MissingFace, NotACycleInterval
from socioplex.persistence import (
    barcodes,
    betti_at,
    betti_curve,
    boundary_matrix,
    boundary_of,
    component_vertices,
    reduce,
    representative_cycle,
)

INF = math.inf


def hollow_triangle():
    return Filtration.from_simplices([
        ((0,), 0), ((1,), 0), ((2,), 0), ((0, 1), 1), ((1, 2), 1), ((0, 2), 1),
    ])


def test_boundary_matrix_triangle():
    f = build_filtration(np.ones((3, 3)) - np.eye(3), 2)
    bm = boundary_matrix(f)
    assert bm.columns() == [[], [], [], [0, 1], [0, 2], [1, 2], [3, 4, 5]]
    assert bm.to_dense().sum() == 9


def test_boundary_matrix_missing_face():
    f = Filtration.from_simplices([((0,), 0), ((0, 1), 1)])
    with pytest.raises(MissingFace):
        boundary_matrix(f)


def test_boundary_matrix_face_after_coface():
    # values out of order can only arise from a hand-built filtration
    f = Filtration([0, 0, 1], [0, 1, 0], [[0, -1], [0, 1], [1, -1]])
    with pytest.raises(MissingFace, match="precedes"):
        boundary_matrix(f)


def test_two_vertices_and_edge():
    f = build_filtration([[0, 1], [1, 0]], 1)
    red = reduce(boundary_matrix(f))
    assert red.pairs() == [(1, 2)]
    assert red.essential() == [0]
    d = barcodes(f)
    assert d.as_tuples() == [(0, 0, 1), (0, 0, INF)]


def test_hollow_triangle_has_essential_loop():
    f = hollow_triangle()
    d = barcodes(f)
    assert d.as_tuples(1) == [(1, 1, INF)]
    iv = d.in_dim(1)[0]
    z = representative_cycle(f, iv)
    assert sorted(s.vertices for s in z) == [(0, 1), (0, 2), (1, 2)]
    assert boundary_of(z) == set()


@pytest.mark.parametrize("clearing", [True, False])
def test_backends_agree(clearing):
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = random_metricish(rng, 9, integer=False)
        bm = boundary_matrix(build_filtration(a, 3))
        r1 = reduce(bm, clearing=clearing, track_dims=(1, 2), backend="numba")
        r2 = reduce(bm, clearing=clearing, track_dims=(1, 2), backend="numpy")
        assert np.array_equal(r1.low, r2.low)
        for j in range(len(bm)):
            assert r1.reduced_column(j) == r2.reduced_column(j)
            assert r1.basis_column(j) == r2.basis_column(j)


def test_clearing_does_not_change_result():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a = random_metricish(rng, 8)
        bm = boundary_matrix(build_filtration(a, 3))
        on, off = reduce(bm, clearing=True), reduce(bm, clearing=False)
        assert on.pairs() == off.pairs()
        assert on.essential() == off.essential()
        assert on.additions <= off.additions


def test_unknown_backend():
    bm = boundary_matrix(hollow_triangle())
    with pytest.raises(ValueError):
        reduce(bm, backend="gpu")


def test_example_barcodes(example10):
    d = barcodes(build_filtration(example10, 2))
    assert d.as_tuples(0) == [(0, 0, 1)] * 9 + [(0, 0, INF)]
    assert d.as_tuples(1) == [(1, 3, 9), (1, 4, 7)]
    assert d.dims() == [0, 1]


def test_example_representatives(example10):
    f = build_filtration(example10, 2)
    d = barcodes(f)
    long, short = d.in_dim(1)
    assert {v for s in representative_cycle(f, long, d.reduction) for v in s.vertices} == {0, 1, 3, 4}
    assert {v for s in representative_cycle(f, short, d.reduction) for v in s.vertices} == {0, 4, 7, 8, 9}


def test_square_bar(square):
    d = barcodes(build_filtration(square, 2))
    assert d.as_tuples(1) == [(1, 1, 2)]
    assert betti_at(d, 1, 1) == 1
    assert betti_at(d, 1.5, 1) == 1
    assert betti_at(d, 2, 1) == 0


def test_betti_curve_example(example10):
    d = barcodes(build_filtration(example10, 2))
    scales = [0, 1, 2, 4, 5, 7, 8]
    assert betti_curve(d, scales, 0) == [10, 1, 1, 1, 1, 1, 1]
    assert betti_curve(d, scales, 1) == [0, 0, 0, 2, 2, 1, 1]


def test_zero_length_bars_kept_on_request():
    a = np.ones((3, 3)) - np.eye(3)
    f = build_filtration(a, 2)
    short = barcodes(f)
    full = barcodes(f, keep_zero_length=True)
    assert short.as_tuples(1) == []
    assert full.as_tuples(1) == [(1, 1, 1)]


def test_truncated_dimension_not_reported():
    a = np.ones((4, 4)) - np.eye(4)
    d = barcodes(build_filtration(a, 2), keep_zero_length=True)
    assert d.dims() == [0, 1]


def test_dimension_zero_representative_rejected(example10):
    f = build_filtration(example10, 2)
    d = barcodes(f)
    with pytest.raises(NotACycleInterval):
        representative_cycle(f, d.in_dim(0)[0])


def test_component_vertices(example10):
    f = build_filtration(example10, 2)
    d = barcodes(f)
    assert component_vertices(f, d.in_dim(0)[-1]) == list(range(10))
    first = d.in_dim(0)[0]
    assert len(component_vertices(f, first)) == 1


def test_text_and_json(square):
    d = barcodes(build_filtration(square, 2))
    assert d.to_text() == "0 0 1\n0 0 1\n0 0 1\n0 0 inf\n1 1 2\n"
    assert '"death": null' in d.to_json()


@pytest.mark.parametrize("seed", range(25))
def test_h0_matches_union_find(seed):
    rng = np.random.default_rng(seed)
    a = random_metricish(rng, int(rng.integers(2, 10)), integer=bool(seed % 2))
    d = barcodes(build_filtration(a, 1))
    for M in np.unique(a):
        assert betti_at(d, M, 0) == components(a, M)


@pytest.mark.parametrize("seed", range(40))
def test_betti_matches_rank_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(2, 8))
    a = random_metricish(rng, n, integer=bool(seed % 2))
    d = barcodes(build_filtration(a, 2))
    for M in np.unique(a):
        assert [betti_at(d, M, k) for k in range(2)] == brute_betti(a, M, 2)


def check_representative(f, d, iv):
    z = representative_cycle(f, iv, d.reduction)
    assert z
    assert boundary_of(z) == set()
    assert max(s.value for s in z) == iv.birth
    assert f[iv.birth_simplex].vertices in {s.vertices for s in z}


@pytest.mark.parametrize("seed", range(20))
def test_representative_contract_random(seed):
    rng = np.random.default_rng(500 + seed)
    a = random_metricish(rng, 8, integer=bool(seed % 2))
    f = build_filtration(a, 3)
    d = barcodes(f, representatives=True)
    for iv in d.in_dim(1) + d.in_dim(2):
        check_representative(f, d, iv)


def test_essential_representative_in_higher_dimension():
    # boundary of a tetrahedron: a 2-sphere that never fills
    faces = [((i,), 0) for i in range(4)]
    faces += [((i, j), 1) for i in range(4) for j in range(i + 1, 4)]
    faces += [(t, 2) for t in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]]
    f = Filtration.from_simplices(faces)
    d = barcodes(f, representatives=True)
    assert d.as_tuples(2) == [(2, 2, INF)]
    z = representative_cycle(f, d.in_dim(2)[0], d.reduction)
    assert len(z) == 4 and boundary_of(z) == set()


@pytest.mark.parametrize("seed", range(10))
def test_small_perturbation_moves_diagram_little(seed):
    rng = np.random.default_rng(seed)
    a = random_metricish(rng, 7, integer=False)
    noise = rng.uniform(-0.01, 0.01, a.shape)
    noise = np.triu(noise, 1)
    b = a + noise + noise.T
    da = barcodes(build_filtration(a, 2))
    db = barcodes(build_filtration(b, 2))
    eps = np.abs(a - b).max()
    for k in (0, 1):
        pa = [(iv.birth, iv.death) for iv in da.in_dim(k)]
        pb = [(iv.birth, iv.death) for iv in db.in_dim(k)]
        assert bottleneck(pa, pb) <= eps + 1e-12


def test_empty_filtration():
    f = Filtration.from_simplices([])
    assert len(barcodes(f)) == 0


def test_env_flag_selects_numpy_backend(tmp_path, example10):
    import os
    import subprocess
    import sys

    example10.save(tmp_path / "ex.json")
    code = (
        "from socioplex import _jit; from socioplex.complex import build_filtration;"
        "from socioplex.metric import DistanceMatrix; from socioplex.persistence import barcodes;"
        f"m = DistanceMatrix.load({str(tmp_path / 'ex.json')!r});"
        "print(_jit.USE_NUMBA, barcodes(build_filtration(m, 2)).as_tuples(1))"
    )
    outputs = {}
    for flag in ("0", "1"):
        env = dict(os.environ, SOCIOPLEX_DISABLE_NUMBA=flag)
        res = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        outputs[flag] = res.stdout.split(" ", 1)
    assert outputs["0"][0] == "True" and outputs["1"][0] == "False"
    assert outputs["0"][1] == outputs["1"][1]
