"""Finite subgroups of SU(2): enumeration, conjugacy classes, projection to SO(3).

Cyclic and binary dihedral groups are stored as presented words, since their
entries live in cyclotomic fields; the binary polyhedral groups are stored as
exact quaternions over Q(sqrt2, sqrt5).  Either way all group logic runs on an
integer Cayley table, so element equality is always exact.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .exactfield import PHI, FieldElement, Quaternion, SQRT2_E

FAMILIES = ("cyclic", "dihedral", "tetrahedral", "octahedral", "icosahedral")
POLYHEDRAL = FAMILIES[2:]
POLY_PREFIX = {"tetrahedral": "T", "octahedral": "O", "icosahedral": "I"}
POLY_ORDER = {"tetrahedral": 24, "octahedral": 48, "icosahedral": 120}
MAX_N = 64


class GroupSpecError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class GroupSpec:
    """One of the five families; ``n`` is used by cyclic and dihedral only."""

    family: str
    n: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GroupSpecError(f"unknown family {self.family!r}")
        if self.family in ("cyclic", "dihedral"):
            if not isinstance(self.n, int) or not 2 <= self.n <= MAX_N:
                raise GroupSpecError(f"{self.family} needs 2 <= n <= {MAX_N}, got {self.n!r}")
        elif self.n:
            raise GroupSpecError(f"{self.family} takes no parameter")

    @classmethod
    def parse(cls, text: str) -> "GroupSpec":
        """Parse ``cyclic:N``, ``dihedral:N`` or a polyhedral family name."""
        name, _, arg = text.strip().lower().partition(":")
        if name in ("cyclic", "dihedral"):
            try:
                n = int(arg)
            except ValueError:
                raise GroupSpecError(f"bad group parameter in {text!r}") from None
            return cls(name, n)
        if arg:
            raise GroupSpecError(f"{name} takes no parameter")
        return cls(name)

    @property
    def order(self) -> int:
        if self.family == "cyclic":
            return self.n
        if self.family == "dihedral":
            return 4 * self.n
        return POLY_ORDER[self.family]

    @property
    def is_polyhedral(self) -> bool:
        return self.family in POLYHEDRAL

    def __str__(self):
        return f"{self.family}:{self.n}" if self.n else self.family


@dataclass(frozen=True)
class CyclicWord:
    """``g^k`` with ``g = Diag(exp(2 pi i/n), exp(-2 pi i/n))``."""

    k: int
    n: int

    def alpha_beta(self) -> tuple:
        return cmath.exp(2j * math.pi * self.k / self.n), 0j

    def __str__(self):
        return f"g^{self.k}"


@dataclass(frozen=True)
class DihedralWord:
    """``A^k B^l`` with ``A = Diag(zeta, conj zeta)``, ``zeta = exp(i pi/n)``, ``B = [[0,-1],[1,0]]``."""

    k: int
    l: int
    n: int

    def alpha_beta(self) -> tuple:
        zeta_k = cmath.exp(1j * math.pi * self.k / self.n)
        if self.l == 0:
            return zeta_k, 0j
        # A^k B = [[0, -zeta^k], [zeta^-k, 0]]
        return 0j, zeta_k.conjugate()

    def __str__(self):
        a = "" if self.k == 0 else ("A" if self.k == 1 else f"A^{self.k}")
        b = "B" if self.l else ""
        return (a + b) or "Id"


def _dihedral_mul(p: DihedralWord, q: DihedralWord) -> DihedralWord:
    n = p.n
    if p.l == 0:
        return DihedralWord((p.k + q.k) % (2 * n), q.l, n)
    # B A^k = A^-k B and B^2 = A^n
    if q.l == 0:
        return DihedralWord((p.k - q.k) % (2 * n), 1, n)
    return DihedralWord((p.k - q.k + n) % (2 * n), 0, n)


def su2_matrix(alpha: complex, beta: complex) -> np.ndarray:
    return np.array([[alpha, -beta.conjugate()], [beta, alpha.conjugate()]])


@dataclass(eq=False)
class FiniteSubgroup:
    spec: GroupSpec
    elements: list
    table: np.ndarray  # table[i, j] = index of elements[i] * elements[j]
    identity: int = 0
    inverse: np.ndarray = field(init=False)
    minus_id: int | None = field(init=False)
    alphas: np.ndarray = field(init=False)
    betas: np.ndarray = field(init=False)

    def __post_init__(self):
        n = len(self.elements)
        e = self.identity
        self.inverse = np.argmax(self.table == e, axis=1)
        assert np.all(self.table[np.arange(n), self.inverse] == e)
        sq = self.table[np.arange(n), np.arange(n)]
        involutions = [i for i in range(n) if sq[i] == e and i != e]
        assert len(involutions) <= 1, "SU(2) has a single element of order 2"
        self.minus_id = involutions[0] if involutions else None
        ab = [el.alpha_beta() for el in self.elements]
        self.alphas = np.array([a for a, _ in ab])
        self.betas = np.array([b for _, b in ab])

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def contains_minus_id(self) -> bool:
        return self.minus_id is not None

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def power(self, i: int, k: int) -> int:
        if k < 0:
            i, k = int(self.inverse[i]), -k
        r, base = self.identity, i
        while k:
            if k & 1:
                r = int(self.table[r, base])
            base = int(self.table[base, base])
            k >>= 1
        return r

    def element_order(self, i: int) -> int:
        k, x = 1, i
        while x != self.identity:
            x = int(self.table[x, i])
            k += 1
        return k

    def matrices(self) -> np.ndarray:
        """Numeric SU(2) matrices, shape ``(|G|, 2, 2)``."""
        m = np.empty((self.order, 2, 2), dtype=complex)
        m[:, 0, 0] = self.alphas
        m[:, 0, 1] = -self.betas.conj()
        m[:, 1, 0] = self.betas
        m[:, 1, 1] = self.alphas.conj()
        return m


@dataclass(frozen=True)
class ConjClass:
    representative: int
    members: tuple
    group_order_of_rep: int
    label: str

    @property
    def size(self) -> int:
        return len(self.members)


def _bfs(identity, generators, mul, bound):
    elements = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for g in generators:
            y = mul(x, g)
            if y not in index:
                index[y] = len(elements)
                elements.append(y)
                if len(elements) > bound:
                    raise ValueError("closure exceeded the size bound: bad generators")
                queue.append(y)
    return elements, index


def _polyhedral_generators(family: str) -> list:
    half = Fraction(1, 2)
    s = Quaternion.of(half, half, half, half)
    if family == "tetrahedral":
        return [s, Quaternion.of(0, 1)]
    if family == "octahedral":
        r = SQRT2_E * half
        return [s, Quaternion(r, r)]
    phi_inv = PHI - 1
    return [s, Quaternion(PHI * half, phi_inv * half, FieldElement(half))]


# Quaternion structure constants: e_a e_b = QS[a, b, c] e_c with basis 1, i, j, k.
_QS = np.zeros((4, 4, 4), dtype=np.int64)
for _a, _b, _c, _s in [
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
    (1, 0, 1, 1), (1, 1, 0, -1), (1, 2, 3, 1), (1, 3, 2, -1),
    (2, 0, 2, 1), (2, 1, 3, -1), (2, 2, 0, -1), (2, 3, 1, 1),
    (3, 0, 3, 1), (3, 1, 2, 1), (3, 2, 1, -1), (3, 3, 0, -1),
]:
    _QS[_a, _b, _c] = _s
# Field structure constants for the basis 1, r2, r5, r10.
_FS = np.zeros((4, 4, 4), dtype=np.int64)
for _p, _r, _t, _s in [
    (0, 0, 0, 1), (0, 1, 1, 1), (0, 2, 2, 1), (0, 3, 3, 1),
    (1, 0, 1, 1), (1, 1, 0, 2), (1, 2, 3, 1), (1, 3, 2, 2),
    (2, 0, 2, 1), (2, 1, 3, 1), (2, 2, 0, 5), (2, 3, 1, 5),
    (3, 0, 3, 1), (3, 1, 2, 2), (3, 2, 1, 5), (3, 3, 0, 10),
]:
    _FS[_p, _r, _t] = _s


def _quaternion_table(elements: list) -> np.ndarray:
    """Exact Cayley table by integer structure constants."""
    coefs = [[c.coefficients for c in q.coords] for q in elements]
    scale = math.lcm(*(f.denominator for q in coefs for c in q for f in c))
    X = np.array([[[int(f * scale) for f in c] for c in q] for q in coefs], dtype=np.int64)
    T1 = np.einsum("iap,abc->ibcp", X, _QS)
    T2 = np.einsum("ibcp,jbr->ijcpr", T1, X)
    prod = np.einsum("ijcpr,prs->ijcs", T2, _FS)
    if np.any(prod % scale):
        raise ArithmeticError("product left the coordinate lattice")
    prod //= scale
    flat_el = X.reshape(len(elements), 16)
    flat_pr = prod.reshape(-1, 16)
    lo = min(flat_el.min(), flat_pr.min())
    base = max(flat_el.max(), flat_pr.max()) - lo + 1
    weights = base ** np.arange(16, dtype=np.int64)
    assert base ** 16 < 2 ** 62
    keys_el = (flat_el - lo) @ weights
    keys_pr = (flat_pr - lo) @ weights
    order = np.argsort(keys_el)
    pos = np.searchsorted(keys_el[order], keys_pr)
    pos = np.clip(pos, 0, len(elements) - 1)
    idx = order[pos]
    if not np.array_equal(keys_el[idx], keys_pr):
        raise ArithmeticError("group is not closed under multiplication")
    return idx.reshape(len(elements), len(elements))


@lru_cache(maxsize=None)
def enumerate_group(spec: GroupSpec) -> FiniteSubgroup:
    """Enumerate ``G``: identity first, then breadth first by right generator products."""
    if spec.family == "cyclic":
        n = spec.n
        elements, _ = _bfs(CyclicWord(0, n), [CyclicWord(1, n)],
                           lambda p, q: CyclicWord((p.k + q.k) % n, n), n)
        ks = np.array([e.k for e in elements])
        pos = np.empty(n, dtype=np.int64)
        pos[ks] = np.arange(n)
        table = pos[(ks[:, None] + ks[None, :]) % n]
    elif spec.family == "dihedral":
        n = spec.n
        elements, index = _bfs(DihedralWord(0, 0, n), [DihedralWord(1, 0, n), DihedralWord(0, 1, n)],
                               _dihedral_mul, 4 * n)
        table = np.array([[index[_dihedral_mul(p, q)] for q in elements] for p in elements])
    else:
        one = Quaternion.of(1)
        elements, _ = _bfs(one, _polyhedral_generators(spec.family), lambda p, q: p * q,
                           POLY_ORDER[spec.family])
        table = _quaternion_table(elements)
    if len(elements) != spec.order:
        raise ValueError(f"enumerated {len(elements)} elements, expected {spec.order}")
    return FiniteSubgroup(spec, elements, np.asarray(table, dtype=np.int64))


def _raw_classes(G: FiniteSubgroup) -> list:
    n = G.order
    assigned = np.full(n, -1)
    classes = []
    for g in range(n):
        if assigned[g] >= 0:
            continue
        conj = np.unique(G.table[G.table[:, g], G.inverse])
        assigned[conj] = len(classes)
        classes.append(tuple(int(c) for c in conj))
    return classes


@lru_cache(maxsize=None)
def conjugacy_classes(G: FiniteSubgroup) -> tuple:
    """Conjugacy classes, ordered by element order then by first member.

    Labels are ``g^m`` (cyclic), ``Id, -Id, A^m, B, AB`` (dihedral) and
    ``P_Id, P_-Id, P_i`` (polyhedral, P in T, O, I).  When two polyhedral
    classes share an element order i they become ``P_iA`` and ``P_iB``;
    ``A`` marks the one holding the smallest power of the vertex-orbit lift
    with that order.
    """
    raw = _raw_classes(G)
    info = [(G.element_order(c[0]), c) for c in raw]
    info.sort(key=lambda t: (t[0], t[1][0]))
    labels = _labels(G, info)
    return tuple(ConjClass(c[0], c, o, lab) for (o, c), lab in zip(info, labels))


def class_index(G: FiniteSubgroup) -> np.ndarray:
    """Array mapping element index to its class position in ``conjugacy_classes(G)``."""
    out = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(conjugacy_classes(G)):
        out[list(c.members)] = i
    return out


def _labels(G: FiniteSubgroup, info: list) -> list:
    spec = G.spec
    labels = []
    if spec.family == "cyclic":
        for _, members in info:
            labels.append(f"g^{G.elements[members[0]].k}")
        return labels
    if spec.family == "dihedral":
        n = spec.n
        for order, members in info:
            words = [G.elements[m] for m in members]
            if order == 1:
                labels.append("Id")
            elif order == 2:
                labels.append("-Id")
            elif words[0].l == 1:
                labels.append("B" if words[0].k % 2 == 0 else "AB")
            else:
                m = min(min(w.k, 2 * n - w.k) for w in words)
                labels.append(f"A^{m}")
        return labels
    prefix = POLY_PREFIX[spec.family]
    by_order: dict = {}
    for pos, (order, _) in enumerate(info):
        by_order.setdefault(order, []).append(pos)
    need_ab = any(len(v) == 2 for v in by_order.values())
    if need_ab:
        from .homotopy import vertex_lift_element

        v = vertex_lift_element(G)
    labels = [""] * len(info)
    for order, positions in by_order.items():
        if order == 1:
            labels[positions[0]] = f"{prefix}_Id"
        elif order == 2:
            labels[positions[0]] = f"{prefix}_-Id"
        elif len(positions) == 1:
            labels[positions[0]] = f"{prefix}_{order}"
        else:
            first = None
            for j in range(1, G.element_order(v) + 1):
                x = G.power(v, j)
                if G.element_order(x) == order:
                    first = x
                    break
            assert first is not None, "vertex lift misses an element order"
            for p in positions:
                tag = "A" if first in info[p][1] else "B"
                labels[p] = f"{prefix}_{order}{tag}"
    return labels


def project_so3_numeric(alpha: complex, beta: complex) -> np.ndarray:
    """The double cover P: SU(2) -> SO(3) on numeric coordinates."""
    a, b = alpha, beta
    ab = a * b
    acb = a.conjugate() * b
    s = a * a + b * b
    d = a * a - b * b
    return np.array([
        [abs(a) ** 2 - abs(b) ** 2, 2 * ab.imag, 2 * ab.real],
        [-2 * acb.imag, s.real, -s.imag],
        [-2 * acb.real, d.imag, d.real],
    ])


def project_so3(G: FiniteSubgroup, i: int) -> np.ndarray:
    return project_so3_numeric(G.alphas[i], G.betas[i])


def project_so3_exact(q: Quaternion) -> list:
    """P(q) with exact entries in Q(sqrt2, sqrt5)."""
    # alpha = w + x i, beta = y - z i, expanded into real and imaginary parts
    w, x, y, z = q.coords
    ab_re, ab_im = w * y + x * z, x * y - w * z
    acb_re, acb_im = w * y - x * z, -w * z - x * y
    s_re, s_im = w * w - x * x + y * y - z * z, 2 * (w * x - y * z)
    d_re, d_im = w * w - x * x - y * y + z * z, 2 * (w * x + y * z)
    return [
        [w * w + x * x - y * y - z * z, 2 * ab_im, 2 * ab_re],
        [-2 * acb_im, s_re, -s_im],
        [-2 * acb_re, d_im, d_re],
    ]


@dataclass(frozen=True)
class RotationGroup:
    """H = P(G) as numeric rotations, one per coset of the kernel {+-Id}."""

    rotations: np.ndarray  # shape (|H|, 3, 3)
    preimages: tuple  # one element index of G per rotation

    @property
    def order(self) -> int:
        return len(self.preimages)


@lru_cache(maxsize=None)
def image_H(G: FiniteSubgroup) -> RotationGroup:
    reps = []
    seen = set()
    for i in range(G.order):
        if i in seen:
            continue
        reps.append(i)
        seen.add(i)
        if G.minus_id is not None:
            seen.add(int(G.table[i, G.minus_id]))
    rots = np.array([project_so3(G, i) for i in reps])
    return RotationGroup(rots, tuple(reps))


def eigen_angle(G: FiniteSubgroup, i: int) -> Fraction:
    """Return ``r`` with eigenvalues of ``g`` equal to ``exp(+-i r pi)``, ``0 < r < 1``."""
    if i == G.identity or i == G.minus_id:
        raise ValueError("eigen_angle is undefined for +-Id: full eigenspace")
    o = G.element_order(i)
    c = G.alphas[i].real
    hits = [j for j in range(o // 2 + 1) if abs(math.cos(2 * math.pi * j / o) - c) < 1e-9]
    if len(hits) != 1:
        raise ArithmeticError(f"cannot reconstruct the eigen-angle of element {i}")
    return Fraction(2 * hits[0], o)


def group_dump(G: FiniteSubgroup) -> dict:
    """JSON-ready dump: exact coordinates or words, and the class partition."""
    if G.spec.is_polyhedral:
        els = [q.to_strings() for q in G.elements]
    elif G.spec.family == "cyclic":
        els = [{"k": e.k} for e in G.elements]
    else:
        els = [{"k": e.k, "l": e.l} for e in G.elements]
    return {
        "group": str(G.spec),
        "order": G.order,
        "elements": els,
        "classes": [
            {"label": c.label, "order": c.group_order_of_rep, "members": list(c.members)}
            for c in conjugacy_classes(G)
        ],
    }
