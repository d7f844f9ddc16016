from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import CYCLIC, DIHEDRAL, POLY, ids
from oracles import cyclic_rows, dihedral_rows, polyhedral_rows
from simplecch.groups import GroupSpec
from simplecch.orbifold import by_label
from simplecch.reeb import (
    ELLIPTIC,
    NEG_HYPERBOLIC,
    action,
    cz_index,
    degree_census,
    dynamical_convexity_check,
    enumerate_orbits,
    local_model_cz,
    make_orbit,
    orbit_table,
    orbit_table_markdown,
    saddle_return_map,
    threshold,
)


def _got(spec, N):
    return {i: sorted(v) for i, v in degree_census(spec, N).names.items()}


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("spec", DIHEDRAL, ids=ids(DIHEDRAL))
def test_dihedral_table(spec, N):
    want = {i: sorted(v) for i, v in dihedral_rows(spec.n, N).items()}
    assert _got(spec, N) == want


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("spec", POLY, ids=ids(POLY))
def test_polyhedral_table(spec, N):
    iv = {"tetrahedral": 3, "octahedral": 4, "icosahedral": 5}[spec.family]
    want = {i: sorted(v) for i, v in polyhedral_rows(iv, N).items()}
    assert _got(spec, N) == want


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("spec", CYCLIC, ids=ids(CYCLIC))
def test_cyclic_orbits(spec, N):
    want = {i: sorted(v) for i, v in cyclic_rows(spec.n, N).items()}
    assert _got(spec, N) == want
    n = spec.n
    census = degree_census(spec, N)
    assert census.total(0) == n - 1
    assert census.total(4 * N - 2) == n - 1
    assert all(census.total(2 * i) == n for i in range(1, 2 * N - 1))
    assert all(census.total(2 * i + 1) == 0 for i in range(2 * N))


def test_cyclic_action_values():
    spec = GroupSpec("cyclic", 6)
    q = by_label(spec)
    eps = 1e-3
    for k in (1, 5, 11):
        assert action(q["min"], k, 1).value(eps) == pytest.approx(2 * math.pi * k * (1 - eps) / 6)
        assert action(q["max"], k, 1).value(eps) == pytest.approx(2 * math.pi * k * (1 + eps) / 6)


def test_thresholds():
    assert threshold(GroupSpec("cyclic", 5), 2) == Fraction(19, 5)
    assert threshold(GroupSpec("dihedral", 3), 1) == Fraction(11, 6)
    assert threshold(GroupSpec("octahedral"), 3) == Fraction(59, 10)
    with pytest.raises(ValueError):
        threshold(GroupSpec("octahedral"), 0)


def test_saddle_orbits_are_negative_hyperbolic():
    q = by_label(GroupSpec("dihedral", 4))
    for k in range(1, 9):
        o = make_orbit(q["saddle"], k, 3)
        assert o.kind == NEG_HYPERBOLIC
        assert o.cz == k
        assert o.good == (k % 2 == 1)
    assert make_orbit(q["min"], 2, 1).kind == ELLIPTIC


def test_cz_closed_forms():
    q = by_label(GroupSpec("icosahedral"))
    v, e, f = q["min"], q["saddle"], q["max"]
    for k in range(1, 40):
        assert cz_index(v, k) == 2 * math.ceil(2 * k / 10) - 1
        assert cz_index(e, k) == k
        assert cz_index(f, k) == 2 * math.floor(2 * k / 6) + 1


@pytest.mark.parametrize("spec", CYCLIC + DIHEDRAL + POLY, ids=ids(CYCLIC + DIHEDRAL + POLY))
def test_no_orbit_sits_on_a_threshold(spec):
    for N in range(1, 5):
        L = threshold(spec, N)
        assert all(o.action.c0 < L for o in enumerate_orbits(spec, N))


@pytest.mark.parametrize("spec", CYCLIC + DIHEDRAL + POLY, ids=ids(CYCLIC + DIHEDRAL + POLY))
def test_dynamical_convexity(spec):
    for N in range(1, 5):
        r = dynamical_convexity_check(spec, N)
        assert r.passed, r.violations
        # contractible orbits have action at least 2 pi, above L_1
        assert (r.checked == 0) == (N == 1)


@pytest.mark.parametrize("spec", [GroupSpec("cyclic", 4), GroupSpec("cyclic", 5), GroupSpec("dihedral", 3)] + POLY,
                         ids=ids([GroupSpec("cyclic", 4), GroupSpec("cyclic", 5), GroupSpec("dihedral", 3)] + POLY))
def test_local_model_matches_closed_form(spec):
    for o in enumerate_orbits(spec, 2):
        assert local_model_cz(o, 1e-4).cz == o.cz, o.name


def test_saddle_return_map_is_hyperbolic():
    M = saddle_return_map(1e-3, k=1)
    ev = np.linalg.eigvals(M)
    assert np.allclose(ev.imag, 0, atol=1e-9)
    assert np.all(ev.real < 0)
    assert np.prod(ev.real) == pytest.approx(1.0)


def test_orbit_table_rows():
    rows = orbit_table(GroupSpec("dihedral", 3), 1)
    assert [r["count"] for r in rows] == [5, 1, 5]
    assert [r["good"] for r in rows] == [5, 0, 5]
    md = orbit_table_markdown(GroupSpec("dihedral", 3), 1)
    assert "h^2" in md.splitlines()[3]
