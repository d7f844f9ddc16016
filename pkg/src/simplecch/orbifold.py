"""Fixed points of H = P(G) on S^2 and the orbifold points of S^2/H.

Axes are found numerically, but everything handed downstream is integer
data: orbit sizes, isotropy orders, Morse indices and multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import FiniteSubgroup, GroupSpec, RotationGroup, conjugacy_classes, enumerate_group, image_H

TOL = 1e-9

# Names of the embedded orbits over (min, saddle, max) per family.
ORBIT_NAMES = {
    "cyclic": ("gamma_s", None, "gamma_n"),
    "dihedral": ("e-", "h", "e+"),
    "polyhedral": ("V", "E", "F"),
}
POINT_NAMES = {
    "cyclic": ("s", None, "n"),
    "dihedral": ("p-", "p_h", "p+"),
    "polyhedral": ("v", "e", "f"),
}
LABELS = ("min", "saddle", "max")


@dataclass(frozen=True)
class FixedPoint:
    direction: tuple
    stabilizer_order: int
    orbit_id: int
    morse_index: int = -1


@dataclass(frozen=True)
class OrbifoldPoint:
    label: str  # min | saddle | max
    name: str  # family specific point name
    orbit_name: str  # name of the embedded Reeb orbit above it
    isotropy: int
    morse_index: int
    d: int
    representative: tuple  # a point of the H-orbit on S^2
    orbit_size: int


def _family_key(spec: GroupSpec) -> str:
    return "polyhedral" if spec.is_polyhedral else spec.family


def rotation_axis(R: np.ndarray) -> np.ndarray:
    """Unit axis of a non-identity rotation from a cross product of rows of R - I."""
    M = R - np.eye(3)
    pairs = [np.cross(M[i], M[j]) for i, j in ((0, 1), (0, 2), (1, 2))]
    v = max(pairs, key=np.linalg.norm)
    nrm = np.linalg.norm(v)
    if nrm < 1e-12:
        raise ArithmeticError("identity passed to rotation_axis")
    return v / nrm


def _find(points: list, p: np.ndarray) -> int:
    for i, q in enumerate(points):
        if np.linalg.norm(q - p) < TOL:
            return i
    return -1


def _canonical_key(p) -> tuple:
    return tuple(np.round(np.asarray(p, dtype=float), 9) + 0.0)


def fixed_points(H: RotationGroup) -> list:
    """All points of S^2 with nontrivial stabilizer, partitioned into H-orbits."""
    pts: list = []
    for R in H.rotations:
        if np.allclose(R, np.eye(3), atol=1e-12):
            continue
        a = rotation_axis(R)
        for v in (a, -a):
            if _find(pts, v) < 0:
                pts.append(v)
    pts.sort(key=_canonical_key)
    orbit_of = [-1] * len(pts)
    n_orbits = 0
    for i, p in enumerate(pts):
        if orbit_of[i] >= 0:
            continue
        for R in H.rotations:
            j = _find(pts, R @ p)
            if j < 0:
                raise ArithmeticError("fixed-point set is not H-invariant")
            orbit_of[j] = n_orbits
        n_orbits += 1
    out = []
    sizes = np.bincount(orbit_of, minlength=n_orbits)
    for i, p in enumerate(pts):
        stab = sum(1 for R in H.rotations if np.linalg.norm(R @ p - p) < TOL)
        if stab * sizes[orbit_of[i]] != H.order:
            raise ArithmeticError("orbit-stabilizer relation fails: geometry corrupted")
        out.append(FixedPoint(tuple(float(x) for x in p), stab, orbit_of[i]))
    return out


def embedded_multiplicity(isotropy: int, G: FiniteSubgroup) -> int:
    return 2 * isotropy if G.order % 2 == 0 else isotropy


def classify_morse(G: FiniteSubgroup, fps: list) -> tuple:
    """Sort the H-orbits of fixed points into (min, saddle, max) orbifold points."""
    spec = G.spec
    key = _family_key(spec)
    H = image_H(G)
    orbits: dict = {}
    for fp in fps:
        orbits.setdefault(fp.orbit_id, []).append(fp)

    def orbit_containing(v) -> int:
        v = np.asarray(v, dtype=float)
        for oid, members in orbits.items():
            if any(np.linalg.norm(np.asarray(m.direction) - v) < TOL for m in members):
                return oid
        raise ArithmeticError(f"no fixed-point orbit contains {v}")

    if spec.family == "cyclic":
        # the generator rotates about the x-axis; for n = 2 the image is trivial
        # and the poles are kept as the critical points of the height function
        iso = H.order
        poles = {(-1.0, 0.0, 0.0), (1.0, 0.0, 0.0)}
        if fps and {_canonical_key(f.direction) for f in fps} != poles:
            raise ArithmeticError("cyclic fixed points are not the poles of the x-axis")
        chosen = [(0, (-1.0, 0.0, 0.0), iso, 1), (2, (1.0, 0.0, 0.0), iso, 1)]
    else:
        if spec.family == "dihedral":
            o_max = orbit_containing((1.0, 0.0, 0.0))
            o_sad = orbit_containing((0.0, 1.0, 0.0))
            rest = [o for o in orbits if o not in (o_max, o_sad)]
            assert len(rest) == 1
            o_min = rest[0]
        else:
            stab = {o: m[0].stabilizer_order for o, m in orbits.items()}
            o_sad = [o for o in orbits if stab[o] == 2]
            assert len(o_sad) == 1
            o_sad = o_sad[0]
            others = [o for o in orbits if o != o_sad]
            if stab[others[0]] != stab[others[1]]:
                o_min = max(others, key=lambda o: stab[o])
            else:
                # tie (tetrahedral): the orbit holding the lexicographically
                # smallest direction is the vertex orbit
                o_min = min(others, key=lambda o: min(_canonical_key(m.direction) for m in orbits[o]))
            o_max = [o for o in others if o != o_min][0]
        chosen = []
        for idx, oid in enumerate((o_min, o_sad, o_max)):
            members = orbits[oid]
            rep = _representative(spec, idx, members)
            chosen.append((idx, rep, members[0].stabilizer_order, len(members)))
    out = []
    for idx, rep, iso, size in chosen:
        out.append(OrbifoldPoint(
            label=LABELS[idx],
            name=POINT_NAMES[key][idx],
            orbit_name=ORBIT_NAMES[key][idx],
            isotropy=iso,
            morse_index=idx,
            d=embedded_multiplicity(iso, G),
            representative=tuple(float(x) for x in rep),
            orbit_size=size,
        ))
    return tuple(out)


def _representative(spec: GroupSpec, idx: int, members: list) -> tuple:
    if spec.family == "dihedral":
        n = spec.n
        t = np.pi / n
        want = [(0.0, np.cos(t), np.sin(t)), (0.0, 1.0, 0.0), (1.0, 0.0, 0.0)][idx]
        for m in members:
            if np.linalg.norm(np.asarray(m.direction) - want) < TOL:
                return m.direction
        raise ArithmeticError("dihedral fixed points are not in the expected position")
    return min((m.direction for m in members), key=_canonical_key)


@lru_cache(maxsize=None)
def orbifold_points(spec: GroupSpec) -> tuple:
    """The quotient orbifold points ordered (min, [saddle], max)."""
    G = enumerate_group(spec)
    return classify_morse(G, fixed_points(image_H(G)))


def by_label(spec: GroupSpec) -> dict:
    return {q.label: q for q in orbifold_points(spec)}


def polyhedral_quantities(spec: GroupSpec) -> dict:
    """|H|, orbit sizes, isotropies and the class count."""
    if not spec.is_polyhedral:
        raise ValueError("polyhedral quantities need a polyhedral group")
    q = by_label(spec)
    G = enumerate_group(spec)
    return {
        "H_order": image_H(G).order,
        "V": q["min"].orbit_size, "E": q["saddle"].orbit_size, "F": q["max"].orbit_size,
        "I_V": q["min"].isotropy, "I_E": q["saddle"].isotropy, "I_F": q["max"].isotropy,
        "conj": len(conjugacy_classes(G)),
    }


def rank_defect_sum(spec: GroupSpec) -> int:
    """Sum over orbifold points of ``d/2 - 1``; equals ``|Conj(G)| - 2``.

    For even ``|G|`` this is the isotropy sum of (I_q - 1).  Odd cyclic
    groups need the multiplicity form, since there ``d = I_q = n``.
    """
    pts = orbifold_points(spec)
    total = sum(q.d for q in pts)
    assert total % 2 == 0
    return total // 2 - len(pts)


def orbifold_dump(spec: GroupSpec) -> dict:
    return {
        "group": str(spec),
        "points": [
            {
                "label": q.label, "name": q.name, "orbit": q.orbit_name,
                "orbit_size": q.orbit_size, "isotropy": q.isotropy,
                "morse_index": q.morse_index, "d": q.d,
            }
            for q in orbifold_points(spec)
        ],
    }
