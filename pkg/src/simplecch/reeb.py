"""Reeb orbits of the perturbed contact forms below the thresholds L_N.

Actions are kept symbolic in the perturbation parameter: an ``ActionForm``
stands for ``pi * (c0 + c1 * eps_N)`` with ``eps_N`` arbitrarily small.
Each embedded orbit sits over an orbifold point with multiplicity ``d`` and
a Morse type, and every index and action formula below depends only on
``(d, type, k)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .groups import GroupSpec
from .orbifold import OrbifoldPoint, orbifold_points

ELLIPTIC = "elliptic"
NEG_HYPERBOLIC = "negative_hyperbolic"


@dataclass(frozen=True, order=True)
class ActionForm:
    """The action ``pi * (c0 + c1 * eps_level)``."""

    level: int
    c0: Fraction
    c1: Fraction

    def value(self, eps: float) -> float:
        return math.pi * (float(self.c0) + float(self.c1) * eps)


@dataclass(frozen=True)
class ReebOrbit:
    base: OrbifoldPoint
    k: int
    level: int
    action: ActionForm
    cz: int
    grading: int
    kind: str
    good: bool
    contractible: bool

    @property
    def name(self) -> str:
        return f"{self.base.orbit_name}^{self.k}"

    @property
    def key(self) -> tuple:
        """Identity of the orbit up to level: (base label, iterate)."""
        return (self.base.label, self.k)


@dataclass
class DegreeCensus:
    level: int
    counts: dict  # grading -> (total, good)
    names: dict  # grading -> orbit names

    def total(self, i: int) -> int:
        return self.counts.get(i, (0, 0))[0]

    def good(self, i: int) -> int:
        return self.counts.get(i, (0, 0))[1]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def threshold(spec: GroupSpec, N: int) -> Fraction:
    """``L_N / pi`` as an exact rational."""
    if N < 1:
        raise ValueError("levels start at N = 1")
    if spec.family == "cyclic":
        return 2 * N - Fraction(1, spec.n)
    if spec.family == "dihedral":
        return 2 * N - Fraction(1, 2 * spec.n)
    return 2 * N - Fraction(1, 10)


def action(base: OrbifoldPoint, k: int, level: int) -> ActionForm:
    c0 = Fraction(2 * k, base.d)
    sign = {0: -1, 1: 0, 2: 1}[base.morse_index]
    return ActionForm(level, c0, sign * c0)


def cz_index(base: OrbifoldPoint, k: int) -> int:
    if base.morse_index == 0:
        return 2 * _ceil_div(2 * k, base.d) - 1
    if base.morse_index == 1:
        return k
    return 2 * ((2 * k) // base.d) + 1


def make_orbit(base: OrbifoldPoint, k: int, level: int) -> ReebOrbit:
    cz = cz_index(base, k)
    saddle = base.morse_index == 1
    return ReebOrbit(
        base=base, k=k, level=level, action=action(base, k, level), cz=cz, grading=cz - 1,
        kind=NEG_HYPERBOLIC if saddle else ELLIPTIC,
        good=not (saddle and k % 2 == 0),
        contractible=k % base.d == 0,
    )


@lru_cache(maxsize=None)
def enumerate_orbits(spec: GroupSpec, N: int) -> tuple:
    """Every iterate of every embedded orbit with ``c0 < L_N / pi``."""
    L = threshold(spec, N)
    out = []
    for base in orbifold_points(spec):
        k = 1
        while True:
            c0 = Fraction(2 * k, base.d)
            if c0 == L:
                raise ArithmeticError(f"{base.orbit_name}^{k} has action exactly L_{N}")
            if c0 > L:
                break
            out.append(make_orbit(base, k, N))
            k += 1
    out.sort(key=lambda o: (o.grading, o.base.morse_index, o.k))
    return tuple(out)


def degree_census(spec: GroupSpec, N: int) -> DegreeCensus:
    counts: dict = {}
    names: dict = {}
    for o in enumerate_orbits(spec, N):
        t, g = counts.get(o.grading, (0, 0))
        counts[o.grading] = (t + 1, g + int(o.good))
        names.setdefault(o.grading, []).append(o.name)
    return DegreeCensus(N, dict(sorted(counts.items())), names)


@dataclass
class ConvexityReport:
    checked: int
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def dynamical_convexity_check(spec: GroupSpec, N: int) -> ConvexityReport:
    """Contractible orbits have CZ >= 3 and CZ = 4j + ind - 1 where k = d j."""
    checked, bad = 0, []
    for o in enumerate_orbits(spec, N):
        if not o.contractible:
            continue
        checked += 1
        j = o.k // o.base.d
        if o.cz < 3:
            bad.append((o.name, o.cz, "cz < 3"))
        if o.cz != 4 * j + o.base.morse_index - 1:
            bad.append((o.name, o.cz, "cz != 4j + ind - 1"))
    return ConvexityReport(checked, bad)


# Local model of the linearized flow near an orbit.

J0 = np.array([[0.0, -1.0], [1.0, 0.0]])
HESSIANS = {0: np.eye(2), 1: np.diag([1.0, -1.0]), 2: -np.eye(2)}
F_VALUE = {0: -1.0, 1: 0.0, 2: 1.0}


def _rot(theta: np.ndarray) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def linearized_path(base: OrbifoldPoint, k: int, eps: float, samples: int = 0) -> tuple:
    """Sample ``M_t = R(2t/f) exp(-t eps J0 H / f^2)`` over one period of the k-th iterate.

    Returns ``(times, matrices)``.  Here ``f = 1 + eps f(p)`` is the perturbed
    height at the orbifold point.
    """
    from scipy.linalg import expm

    f = 1.0 + eps * F_VALUE[base.morse_index]
    period = 2 * math.pi * k * f / base.d
    if samples <= 0:
        samples = 200 * (k + 1)
    t = np.linspace(0.0, period, samples + 1)
    gen = -eps * J0 @ HESSIANS[base.morse_index] / f**2
    exps = expm(t[:, None, None] * gen)
    return t, _rot(2 * t / f) @ exps


def _winding(vectors: np.ndarray) -> float:
    ang = np.unwrap(np.arctan2(vectors[:, 1], vectors[:, 0]))
    return float(ang[-1] - ang[0])


@dataclass
class LocalModelResult:
    cz: int
    rotation: float  # winding in units of 2 pi
    eigenvalues: tuple


def local_model_cz(orbit: ReebOrbit, eps: float = 1e-4, samples: int = 0) -> LocalModelResult:
    """Conley-Zehnder index recomputed from the sampled linearized flow.

    Elliptic orbits: the path is a rotation, CZ = 2 floor(theta) + 1 with
    theta the total winding.  Hyperbolic orbits: an eigenvector of the
    return map turns by a multiple of pi, and CZ is twice the winding.
    """
    _, M = linearized_path(orbit.base, orbit.k, eps, samples)
    ret = M[-1]
    ev = np.linalg.eigvals(ret)
    if np.max(np.abs(ev.imag)) > 1e-12:
        theta = _winding(M[:, :, 0]) / (2 * math.pi)
        if abs(theta - round(theta)) < 1e-12:
            raise ArithmeticError("degenerate return map")
        cz = 2 * math.floor(theta) + 1
    else:
        w, V = np.linalg.eig(ret)
        v = np.real(V[:, 0])
        theta = _winding(M @ v) / (2 * math.pi)
        half_turns = round(2 * theta)
        if abs(2 * theta - half_turns) > 1e-6:
            raise ArithmeticError("eigenvector does not return to its line")
        cz = half_turns
    eigs = tuple(sorted((complex(z) for z in ev), key=lambda z: (z.real, z.imag)))
    return LocalModelResult(cz, theta, eigs)


def saddle_return_map(eps: float, k: int = 4) -> np.ndarray:
    """Return map of the k-th iterate of the saddle orbit (d = 4)."""
    from .orbifold import OrbifoldPoint

    base = OrbifoldPoint("saddle", "p_h", "h", 2, 1, 4, (0.0, 1.0, 0.0), 1)
    _, M = linearized_path(base, k, eps, samples=8)
    return M[-1]


def orbit_table(spec: GroupSpec, N: int) -> list:
    """Rows ``(grading, cz, orbit names, c_i)`` in increasing grading."""
    census = degree_census(spec, N)
    rows = []
    for i in range(0, 4 * N - 1):
        names = census.names.get(i, [])
        rows.append({"grading": i, "cz": i + 1, "orbits": names, "count": census.total(i),
                     "good": census.good(i)})
    return rows


def orbit_table_markdown(spec: GroupSpec, N: int) -> str:
    lines = ["| grading | index | orbits | c_i |", "|---|---|---|---|"]
    for r in orbit_table(spec, N):
        names = ", ".join(r["orbits"])
        lines.append(f"| {r['grading']} | {r['cz']} | {names} | {r['count']} |")
    return "\n".join(lines)
