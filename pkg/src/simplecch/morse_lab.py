"""A numerical H-invariant Morse function on S^2 and its orbifold Morse homology.

The function is a signed sum of Gaussian bumps: positive bumps on the
index-2 fixed-point orbit and negative bumps on the index-0 orbit.  Both
sets are H-invariant, so the function is too, and every fixed point of H
is automatically critical.  Whether there are other critical points, and
whether the indices come out right, is checked numerically.

Nothing in the exact pipeline depends on this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp
from scipy.spatial import cKDTree

from .groups import GroupSpec, enumerate_group, image_H
from .homology import exact_rank
from .orbifold import fixed_points, orbifold_points

GRAD_TOL = 1e-10
EIG_TOL = 1e-8


class MorseError(ArithmeticError):
    pass


def _tangent_basis(p: np.ndarray) -> np.ndarray:
    """Orthonormal 3x2 basis of the tangent plane at ``p``."""
    a = np.array([1.0, 0.0, 0.0]) if abs(p[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = np.cross(p, a)
    u /= np.linalg.norm(u)
    v = np.cross(p, u)
    return np.stack([u, v], axis=1)


@dataclass
class SphereFunction:
    """``f(p) = sum_{X2} exp(-|p-q|^2/s^2) - sum_{X0} exp(-|p-q|^2/s^2)``."""

    centers: np.ndarray  # (m, 3)
    signs: np.ndarray  # (m,)
    sigma: float

    def value(self, P: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(P)
        d2 = np.sum((P[:, None, :] - self.centers[None, :, :]) ** 2, axis=-1)
        return np.exp(-d2 / self.sigma**2) @ self.signs

    def _ambient(self, P: np.ndarray):
        P = np.atleast_2d(P)
        diff = P[:, None, :] - self.centers[None, :, :]
        e = np.exp(-np.sum(diff**2, axis=-1) / self.sigma**2) * self.signs
        grad = -2.0 / self.sigma**2 * np.einsum("km,kmi->ki", e, diff)
        return diff, e, grad

    def gradient(self, P: np.ndarray) -> np.ndarray:
        """Tangential gradient, shape (k, 3)."""
        P = np.atleast_2d(P)
        _, _, g = self._ambient(P)
        return g - np.sum(g * P, axis=1, keepdims=True) * P

    def hessian(self, p: np.ndarray) -> tuple:
        """Riemannian Hessian at ``p`` in a tangent basis; returns (2x2 matrix, basis)."""
        p = np.asarray(p, dtype=float)
        diff, e, g = self._ambient(p)
        s2 = self.sigma**2
        amb = np.einsum("m,mi,mj->ij", e[0], diff[0], diff[0]) * 4 / s2**2 - 2 / s2 * e[0].sum() * np.eye(3)
        T = _tangent_basis(p)
        hess = T.T @ (amb - float(g[0] @ p) * np.eye(3)) @ T
        return (hess + hess.T) / 2, T


def default_sigma(spec: GroupSpec) -> float:
    """Bump width scaled to the spacing of the fixed points."""
    pts = np.array([fp.direction for fp in fixed_points(image_H(enumerate_group(spec)))])
    if len(pts) < 3:
        return 1.0
    d = np.linalg.norm(pts[:, None] - pts[None, :], axis=-1)
    d[d < 1e-9] = np.inf
    return float(SIGMA_FACTOR * d.min())


SIGMA_FACTOR = 1.0


def morse_sets(spec: GroupSpec) -> tuple:
    """Index-0, index-1 and index-2 fixed points on S^2 as arrays."""
    G = enumerate_group(spec)
    H = image_H(G)
    out = []
    for q in orbifold_points(spec):
        rep = np.array(q.representative)
        orbit = []
        for R in H.rotations:
            x = R @ rep
            if all(np.linalg.norm(x - y) > 1e-9 for y in orbit):
                orbit.append(x)
        out.append(np.array(orbit))
    if spec.family == "cyclic":
        return out[0], np.zeros((0, 3)), out[1]
    return tuple(out)


def build_invariant_morse(spec: GroupSpec, sigma: float | None = None) -> SphereFunction:
    X0, _, X2 = morse_sets(spec)
    if sigma is None:
        sigma = default_sigma(spec)
    centers = np.vstack([X2, X0])
    signs = np.concatenate([np.ones(len(X2)), -np.ones(len(X0))])
    return SphereFunction(centers, signs, sigma)


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z**2)
    t = np.pi * (1 + 5**0.5) * i
    return np.stack([r * np.cos(t), r * np.sin(t), z], axis=1)


@dataclass(frozen=True)
class CriticalPoint:
    point: tuple
    index: int
    value: float
    eigenvalues: tuple


def _newton(f: SphereFunction, p: np.ndarray, iters: int = 60) -> np.ndarray | None:
    for _ in range(iters):
        g = f.gradient(p)[0]
        if np.linalg.norm(g) < GRAD_TOL:
            return p
        hess, T = f.hessian(p)
        try:
            step = np.linalg.solve(hess, T.T @ g)
        except np.linalg.LinAlgError:
            return None
        p = p - T @ step
        p /= np.linalg.norm(p)
    return p if np.linalg.norm(f.gradient(p)[0]) < GRAD_TOL else None


def find_critical_points(f: SphereFunction, samples: int = 10**6, neighbors: int = 8,
                         chunk: int = 50_000) -> list:
    """Grid screening of |grad f| followed by Newton polishing."""
    P = fibonacci_sphere(samples)
    gn = np.concatenate([np.linalg.norm(f.gradient(P[i:i + chunk]), axis=1)
                         for i in range(0, samples, chunk)])
    _, nbr = cKDTree(P).query(P, k=neighbors + 1)
    local_min = np.all(gn[:, None] <= gn[nbr[:, 1:]], axis=1)
    found: list = []
    for p in P[local_min]:
        q = _newton(f, p.copy())
        if q is None:
            continue
        if any(np.linalg.norm(q - np.array(c.point)) < 1e-8 for c in found):
            continue
        hess, _ = f.hessian(q)
        ev = np.linalg.eigvalsh(hess)
        if np.min(np.abs(ev)) <= EIG_TOL:
            raise MorseError(f"degenerate critical point at {q}")
        found.append(CriticalPoint(tuple(q), int(np.sum(ev < 0)), float(f.value(q)[0]), tuple(ev)))
    found.sort(key=lambda c: (c.index, tuple(np.round(c.point, 9))))
    return found


def match_fixed_points(spec: GroupSpec, crit: list, tol: float = 1e-6) -> bool:
    """Critical set equals Fix(H) with index i on the i-th Morse set."""
    sets = morse_sets(spec)
    expected = [(tuple(p), i) for i, X in enumerate(sets) for p in X]
    if len(expected) != len(crit):
        return False
    for p, i in expected:
        hits = [c for c in crit if np.linalg.norm(np.array(c.point) - p) < tol]
        if len(hits) != 1 or hits[0].index != i:
            return False
    return True


@dataclass
class FlowCensus:
    # per saddle: endpoints of the two descending and two ascending trajectories
    down: list = field(default_factory=list)
    up: list = field(default_factory=list)

    def counts(self) -> dict:
        return {"saddle_to_min": sum(len(d) for d in self.down),
                "saddle_to_max": sum(len(u) for u in self.up)}


def _flow_to(f: SphereFunction, start: np.ndarray, sign: float, targets: np.ndarray,
             origin: int, t_max: float = 400.0) -> int:
    targets = targets.copy()
    targets[origin] = np.inf  # never "arrive" back at the starting saddle

    def rhs(_, y):
        y = y / np.linalg.norm(y)
        return sign * f.gradient(y)[0]

    def arrived(_, y):
        y = y / np.linalg.norm(y)
        return np.min(np.linalg.norm(targets - y, axis=1)) - 1e-4

    arrived.terminal = True
    sol = solve_ivp(rhs, (0.0, t_max), start, method="RK45", rtol=1e-10, atol=1e-12,
                    events=arrived)
    y = sol.y[:, -1] / np.linalg.norm(sol.y[:, -1])
    dist = np.linalg.norm(targets - y, axis=1)
    j = int(np.argmin(dist))
    if dist[j] > 1e-3:
        raise MorseError("gradient trajectory did not converge to a critical point")
    return j


def flow_lines(f: SphereFunction, crit: list, offset: float = 1e-4) -> FlowCensus:
    """From each saddle, follow -grad along the unstable line and +grad along the stable line."""
    pts = np.array([c.point for c in crit])
    census = FlowCensus()
    for j, c in enumerate(crit):
        if c.index != 1:
            continue
        p = np.array(c.point)
        hess, T = f.hessian(p)
        w, V = np.linalg.eigh(hess)
        unstable, stable = T @ V[:, 0], T @ V[:, 1]
        down, up = [], []
        for s in (1, -1):
            down.append(_flow_to(f, p + s * offset * unstable, -1.0, pts, j))
            up.append(_flow_to(f, p + s * offset * stable, 1.0, pts, j))
        census.down.append(down)
        census.up.append(up)
    return census


@dataclass
class SmaleReport:
    saddle_values_equal: bool
    saddle_connections: int

    @property
    def passed(self) -> bool:
        return self.saddle_values_equal and self.saddle_connections == 0


def verify_smale(f: SphereFunction, crit: list, census: FlowCensus | None = None) -> SmaleReport:
    saddles = [c.value for c in crit if c.index == 1]
    equal = not saddles or (max(saddles) - min(saddles) < 1e-9)
    if census is None:
        census = flow_lines(f, crit)
    conn = sum(1 for ends in census.down + census.up for j in ends if crit[j].index == 1)
    return SmaleReport(equal, conn)


@dataclass
class OrbifoldMorseComplex:
    points: list  # dicts: orbit label, index, isotropy, orientable
    differential: dict  # degree -> matrix rows (target) x cols (source)
    ranks: tuple


def _orientable(f: SphereFunction, p: np.ndarray, index: int, rotations: np.ndarray) -> bool:
    """Whether every rotation fixing ``p`` preserves the orientation of the unstable space."""
    hess, T = f.hessian(p)
    w, V = np.linalg.eigh(hess)
    U = T @ V[:, :index]  # unstable directions (negative eigenvalues)
    for R in rotations:
        if np.linalg.norm(R @ p - p) > 1e-9:
            continue
        if index and np.linalg.det(U.T @ R @ U) < 0:
            return False
    return True


def orbifold_morse_homology(spec: GroupSpec, f: SphereFunction | None = None,
                            crit: list | None = None, census: FlowCensus | None = None,
                            samples: int = 10**6) -> OrbifoldMorseComplex:
    G = enumerate_group(spec)
    H = image_H(G)
    if f is None:
        f = build_invariant_morse(spec)
    if crit is None:
        crit = find_critical_points(f, samples)
    if census is None:
        census = flow_lines(f, crit)
    pts = np.array([c.point for c in crit])

    def orbit_of(j: int) -> frozenset:
        out = set()
        for R in H.rotations:
            x = R @ pts[j]
            out.add(int(np.argmin(np.linalg.norm(pts - x, axis=1))))
        return frozenset(out)

    orbits = []
    for j in range(len(crit)):
        o = orbit_of(j)
        if o not in orbits:
            orbits.append(o)
    info = []
    for o in orbits:
        j = min(o)
        iso = H.order // len(o)
        info.append({"members": sorted(o), "index": crit[j].index, "isotropy": iso,
                     "orientable": _orientable(f, pts[j], crit[j].index, H.rotations)})
    gens = [i for i, d in enumerate(info) if d["orientable"]]
    saddle_idx = [i for i, c in enumerate(crit) if c.index == 1]

    def weight(src: int, tgt: int) -> int:
        # Counting lines upstairs from one lift of p to all lifts of q gives the
        # orbifold weight |Gamma_p|/|Gamma_x| per quotient line.  The sign is +1
        # or -1 by the direction of the saddle's line; signs are only reached
        # when a saddle is orientable, which does not happen for these groups.
        s, t = info[src], info[tgt]
        if s["index"] == 1:
            ends = census.down[saddle_idx.index(s["members"][0])]
            return sum(sign for sign, e in zip((1, -1), ends) if e in t["members"])
        top = s["members"][0]
        return sum(sign for m in t["members"]
                   for sign, e in zip((1, -1), census.up[saddle_idx.index(m)]) if e == top)

    diff = {}
    for deg in (1, 2):
        src = [i for i in gens if info[i]["index"] == deg]
        tgt = [i for i in gens if info[i]["index"] == deg - 1]
        diff[deg] = [[weight(s, t) for s in src] for t in tgt]
    d1, d2 = np.array(diff[1], dtype=np.int64), np.array(diff[2], dtype=np.int64)
    if d1.size and d2.size and np.any(d1 @ d2):
        raise MorseError("orbifold Morse differential does not square to zero")
    ranks = []
    for deg in range(3):
        dim = sum(1 for i in gens if info[i]["index"] == deg)
        r_out = exact_rank(diff.get(deg, []))
        r_in = exact_rank(diff.get(deg + 1, []))
        ranks.append(dim - r_out - r_in)
    return OrbifoldMorseComplex(
        [{k: v for k, v in d.items() if k != "members"} | {"size": len(d["members"])} for d in info],
        diff, tuple(ranks))


@dataclass
class MorseRun:
    spec: str
    sigma: float
    critical: list
    fixed_point_match: bool
    index_counts: tuple
    smale: SmaleReport
    flow: dict
    homology: tuple

    @property
    def passed(self) -> bool:
        return self.fixed_point_match and self.smale.passed and self.homology == (1, 0, 1)

    def to_json(self) -> str:
        return json.dumps({
            "group": self.spec, "sigma": self.sigma,
            "critical_points": [{"point": list(c.point), "index": c.index, "value": c.value}
                                for c in self.critical],
            "fixed_point_match": self.fixed_point_match,
            "index_counts": list(self.index_counts),
            "smale": {"saddle_values_equal": self.smale.saddle_values_equal,
                      "saddle_connections": self.smale.saddle_connections},
            "flow": self.flow, "homology": list(self.homology),
        }, sort_keys=True)

    def to_csv(self) -> str:
        rows = ["x,y,z,index,value"]
        rows += [f"{c.point[0]:.12f},{c.point[1]:.12f},{c.point[2]:.12f},{c.index},{c.value:.12f}"
                 for c in self.critical]
        return "\n".join(rows)


@lru_cache(maxsize=None)
def run_morse_lab(spec: GroupSpec, samples: int = 10**6) -> MorseRun:
    f = build_invariant_morse(spec)
    crit = find_critical_points(f, samples)
    census = flow_lines(f, crit)
    counts = tuple(sum(1 for c in crit if c.index == i) for i in range(3))
    hom = orbifold_morse_homology(spec, f, crit, census)
    return MorseRun(str(spec), f.sigma, crit, match_fixed_points(spec, crit), counts,
                    verify_smale(f, crit, census), census.counts(), hom.ranks)


def contour_grid(f: SphereFunction, n_theta: int = 90, n_phi: int = 180) -> dict:
    """Values on a latitude-longitude grid for external plotting."""
    th = np.linspace(0, np.pi, n_theta)
    ph = np.linspace(0, 2 * np.pi, n_phi)
    T, Ph = np.meshgrid(th, ph, indexing="ij")
    P = np.stack([np.sin(T) * np.cos(Ph), np.sin(T) * np.sin(Ph), np.cos(T)], axis=-1).reshape(-1, 3)
    return {"theta": th.tolist(), "phi": ph.tolist(), "values": f.value(P).reshape(n_theta, n_phi).tolist()}
