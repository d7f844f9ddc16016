"""Free homotopy classes of Reeb orbits as conjugacy classes of G.

An embedded orbit over ``p`` lifts to the Hopf fiber through
``z = fiber_point(p)``; going once around the quotient orbit ends at
``g z = exp(2 pi i/d) z`` for a unique ``g`` in G, and the orbit's class is
``[g]``.  The k-th iterate has class ``[g^k]``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .groups import (
    FiniteSubgroup,
    GroupSpec,
    class_index,
    conjugacy_classes,
    enumerate_group,
)
from .orbifold import OrbifoldPoint, classify_morse, fixed_points, image_H, orbifold_points
from .reeb import ActionForm, ReebOrbit, cz_index, enumerate_orbits

MATCH_TOL = 1e-7


def hopf(alpha: complex, beta: complex) -> np.ndarray:
    ab = alpha.conjugate() * beta
    return np.array([abs(alpha) ** 2 - abs(beta) ** 2, -2 * ab.imag, -2 * ab.real])


def fiber_point(p) -> tuple:
    """A point ``(alpha, beta)`` of S^3 over ``p`` in S^2."""
    x, y, z = (float(v) for v in p)
    if 1 + x < 1e-15:
        return 0j, 1 + 0j
    alpha = math.sqrt((1 + x) / 2)
    beta = -complex(z, y) / (2 * alpha)
    return complex(alpha), beta


def lift_element(G: FiniteSubgroup, p, d: int) -> int:
    """The unique ``g`` with ``g z = exp(2 pi i/d) z`` for ``z`` over ``p``."""
    a, b = fiber_point(p)
    z = np.array([a, b])
    gz = G.matrices() @ z
    target = cmath.exp(2j * math.pi / d) * z
    hits = np.flatnonzero(np.linalg.norm(gz - target, axis=1) < MATCH_TOL)
    if len(hits) != 1:
        raise ArithmeticError(f"{len(hits)} group elements match the fiber rotation")
    return int(hits[0])


def vertex_lift_element(G: FiniteSubgroup) -> int:
    """Lift element of the min-type (vertex) orbit; used to fix A/B class labels."""
    pts = classify_morse(G, fixed_points(image_H(G)))
    return lift_element(G, pts[0].representative, pts[0].d)


@lru_cache(maxsize=None)
def embedded_lifts(spec: GroupSpec) -> dict:
    """Map orbifold-point label to the lift element of its embedded orbit."""
    G = enumerate_group(spec)
    return {q.label: lift_element(G, q.representative, q.d) for q in orbifold_points(spec)}


def orbit_class(spec: GroupSpec, base: OrbifoldPoint, k: int = 1):
    """Conjugacy class of the k-th iterate of the embedded orbit over ``base``."""
    G = enumerate_group(spec)
    g = G.power(embedded_lifts(spec)[base.label], k)
    return conjugacy_classes(G)[class_index(G)[g]]


def class_label_of(spec: GroupSpec, base: OrbifoldPoint, k: int) -> str:
    return orbit_class(spec, base, k).label


def class_table(spec: GroupSpec) -> dict:
    """Residue form of the class tables.

    Maps class label -> orbit name -> sorted residues ``r mod d`` such that
    the iterates ``k = r (mod d)``, ``k >= 1``, lie in that class.
    """
    out = {c.label: {} for c in conjugacy_classes(enumerate_group(spec))}
    for base in orbifold_points(spec):
        for r in range(base.d):
            lab = class_label_of(spec, base, r if r else base.d)
            out[lab].setdefault(base.orbit_name, []).append(r)
    return out


def class_table_markdown(spec: GroupSpec) -> str:
    lines = ["| class | orbits |", "|---|---|"]
    G = enumerate_group(spec)
    for c in conjugacy_classes(G):
        cells = []
        for name, res in class_table(spec)[c.label].items():
            d = next(q.d for q in orbifold_points(spec) if q.orbit_name == name)
            cells.extend(f"{name}^({r}+{d}k)" for r in res)
        lines.append(f"| {c.label} | {', '.join(cells)} |")
    return "\n".join(lines)


@dataclass
class CheckReport:
    items: list = field(default_factory=list)  # (description, passed)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.items)


def antipodal_and_distinguish_checks(spec: GroupSpec) -> CheckReport:
    """Equalities from antipodal fixed points and the listed inequalities."""
    if not spec.is_polyhedral:
        raise ValueError("these checks concern the binary polyhedral groups")
    q = {p.label: p for p in orbifold_points(spec)}
    V, E, F = q["min"], q["saddle"], q["max"]

    def cls(base, k):
        return class_label_of(spec, base, k)

    rep = CheckReport()
    if spec.family == "tetrahedral":
        rep.items.append(("[V] = [F^5]", cls(V, 1) == cls(F, 5)))
        rep.items.append(("[V^2] != [F^2]", cls(V, 2) != cls(F, 2)))
    elif spec.family == "octahedral":
        rep.items.append(("[V] = [V^7]", cls(V, 1) == cls(V, 7)))
        rep.items.append(("[E] != [V^2]", cls(E, 1) != cls(V, 2)))
        rep.items.append(("[V] != [V^3]", cls(V, 1) != cls(V, 3)))
    else:
        rep.items.append(("[V] = [V^9]", cls(V, 1) == cls(V, 9)))
        rep.items.append(("[V^2] != [V^4]", cls(V, 2) != cls(V, 4)))
    return rep


def action_less_for_all_small(plus: ActionForm, minus: ActionForm) -> bool:
    """Whether ``A(plus) < A(minus)`` for all small enough perturbations.

    At one level both forms share one epsilon, so the order is lexicographic
    in ``(c0, c1)``.  Across levels the two epsilons are independent and
    arbitrarily small, so equal leading terms are only ordered when the
    correction terms have opposite signs.
    """
    if plus.level == minus.level:
        return (plus.c0, plus.c1) < (minus.c0, minus.c1)
    if plus.c0 != minus.c0:
        return plus.c0 < minus.c0
    return plus.c1 <= 0 <= minus.c1 and (plus.c1, minus.c1) != (0, 0)


@dataclass(frozen=True)
class Counterexample:
    plus: str
    minus: str
    clause: str


def verify_prop_cz_action(spec: GroupSpec, N: int, M: int) -> list:
    """Exhaustive check over same-class pairs (plus at level N, minus at level M).

    (a) equal CZ forces the same base point and the same iterate;
    (b) smaller CZ forces smaller action for all small perturbations.
    """
    if N > M:
        raise ValueError("need N <= M")
    G = enumerate_group(spec)
    cidx = class_index(G)
    lifts = embedded_lifts(spec)

    def annotated(level):
        return [(o, cidx[G.power(lifts[o.base.label], o.k)]) for o in enumerate_orbits(spec, level)]

    plus_list, minus_list = annotated(N), annotated(M)
    bad = []
    by_class: dict = {}
    for o, c in minus_list:
        by_class.setdefault(int(c), []).append(o)
    for p, c in plus_list:
        for m in by_class.get(int(c), ()):
            if p.cz == m.cz:
                if p.key != m.key:
                    bad.append(Counterexample(f"{p.name}@{N}", f"{m.name}@{M}", "a"))
            elif p.cz < m.cz and not action_less_for_all_small(p.action, m.action):
                bad.append(Counterexample(f"{p.name}@{N}", f"{m.name}@{M}", "b"))
    return bad


def count_same_class_pairs(spec: GroupSpec, N: int, M: int) -> int:
    G = enumerate_group(spec)
    cidx = class_index(G)
    lifts = embedded_lifts(spec)
    counts = np.zeros(len(conjugacy_classes(G)), dtype=np.int64)
    for o in enumerate_orbits(spec, M):
        counts[cidx[G.power(lifts[o.base.label], o.k)]] += 1
    return int(sum(counts[cidx[G.power(lifts[o.base.label], o.k)]] for o in enumerate_orbits(spec, N)))


def building_index(top: ReebOrbit, bottoms: list) -> int:
    """``ind = k - 1 + CZ(top) - sum CZ(bottom_i)`` for k bottom ends."""
    if not bottoms:
        raise ValueError("a building needs at least one negative end")
    return len(bottoms) - 1 + top.cz - sum(b.cz for b in bottoms)


def exceptional_orbit(spec: GroupSpec) -> OrbifoldPoint:
    """The min-type orbit whose d-th iterate is the contractible CZ-3 orbit."""
    return orbifold_points(spec)[0]


@dataclass
class BadBuildingReport:
    d2: int
    indices: dict  # d1 -> ind(u1)

    @property
    def passed(self) -> bool:
        return all(v == 2 for v in self.indices.values())


def bad_building_exclusion(spec: GroupSpec, d1_max: int = 10) -> BadBuildingReport:
    """``ind(u1) = 1 + CZ(g^(d1+d2)) - CZ(g^d1) - 3`` over d1 = 1..d1_max."""
    base = exceptional_orbit(spec)
    d2 = base.d
    assert cz_index(base, d2) == 3
    vals = {}
    for d1 in range(1, d1_max + 1):
        vals[d1] = 1 + cz_index(base, d1 + d2) - cz_index(base, d1) - cz_index(base, d2)
    return BadBuildingReport(d2, vals)
