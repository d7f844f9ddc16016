from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import ids
from simplecch.groups import GroupSpec, enumerate_group, image_H
from simplecch.morse_lab import (
    build_invariant_morse,
    contour_grid,
    fibonacci_sphere,
    find_critical_points,
    morse_sets,
    run_morse_lab,
)

SAMPLES = 200_000
GROUPS = [GroupSpec("cyclic", 2), GroupSpec("cyclic", 5), GroupSpec("dihedral", 2), GroupSpec("dihedral", 3),
          GroupSpec("dihedral", 6), GroupSpec("tetrahedral"), GroupSpec("octahedral")]

# index-0, index-1, index-2 counts: the sets of fixed points sorted by Morse index
INDEX_COUNTS = {"tetrahedral": (4, 6, 4), "octahedral": (6, 12, 8), "icosahedral": (12, 30, 20)}


def expected_counts(spec):
    if spec.family == "cyclic":
        return (1, 0, 1)
    if spec.family == "dihedral":
        return (spec.n, spec.n, 2)
    return INDEX_COUNTS[spec.family]


def test_fibonacci_grid_is_on_sphere():
    P = fibonacci_sphere(1000)
    assert np.allclose(np.linalg.norm(P, axis=1), 1)
    assert abs(P.mean(axis=0)).max() < 1e-2


@pytest.mark.parametrize("spec", GROUPS, ids=ids(GROUPS))
def test_function_is_invariant(spec):
    f = build_invariant_morse(spec)
    H = image_H(enumerate_group(spec))
    P = fibonacci_sphere(500)
    base = f.value(P)
    for R in H.rotations:
        assert np.allclose(f.value(P @ R.T), base, atol=1e-12)


def test_gradient_matches_finite_differences():
    f = build_invariant_morse(GroupSpec("dihedral", 3))
    rng = np.random.default_rng(0)
    p = rng.normal(size=3)
    p /= np.linalg.norm(p)
    g = f.gradient(p)[0]
    assert abs(g @ p) < 1e-12
    h = 1e-6
    for v in np.linalg.svd(np.eye(3) - np.outer(p, p))[0][:, :2].T:
        q1 = (p + h * v) / np.linalg.norm(p + h * v)
        q0 = (p - h * v) / np.linalg.norm(p - h * v)
        assert (f.value(q1)[0] - f.value(q0)[0]) / (2 * h) == pytest.approx(g @ v, rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("spec", GROUPS, ids=ids(GROUPS))
def test_morse_lab(spec):
    run = run_morse_lab(spec, SAMPLES)
    assert run.index_counts == expected_counts(spec)
    assert run.fixed_point_match
    assert run.smale.passed
    assert run.smale.saddle_connections == 0
    assert run.homology == (1, 0, 1)
    assert run.passed


def test_morse_sets_sizes():
    X0, X1, X2 = morse_sets(GroupSpec("icosahedral"))
    assert (len(X0), len(X1), len(X2)) == (12, 30, 20)


@pytest.mark.parametrize("factor", [0.5, 1.5])
def test_sigma_robustness(factor):
    from simplecch.morse_lab import default_sigma

    spec = GroupSpec("tetrahedral")
    f = build_invariant_morse(spec, default_sigma(spec) * factor)
    crit = find_critical_points(f, SAMPLES)
    assert tuple(sum(1 for c in crit if c.index == i) for i in range(3)) == (4, 6, 4)


def test_exports():
    run = run_morse_lab(GroupSpec("dihedral", 3), SAMPLES)
    data = json.loads(run.to_json())
    assert data["homology"] == [1, 0, 1]
    assert data["flow"] == {"saddle_to_min": 6, "saddle_to_max": 6}
    csv = run.to_csv().splitlines()
    assert csv[0] == "x,y,z,index,value" and len(csv) == 1 + 8
    grid = contour_grid(build_invariant_morse(GroupSpec("dihedral", 3)), 10, 20)
    assert np.array(grid["values"]).shape == (10, 20)
