"""Filtered chain complexes, their homology, inclusion maps and the direct limit."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .groups import GroupSpec, conjugacy_classes, enumerate_group
from .orbifold import rank_defect_sum
from .reeb import enumerate_orbits


def exact_rank(rows: list) -> int:
    """Rank over Q of a matrix given as a list of rows, by Gaussian elimination."""
    m = [[Fraction(v) for v in r] for r in rows]
    rank, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rank < len(m) and col < ncols:
        piv = next((i for i in range(rank, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(rank + 1, len(m)):
            if m[i][col] != 0:
                f = m[i][col] / m[rank][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class GradedRanks:
    ranks: tuple  # sorted (degree, rank) pairs with rank > 0

    @classmethod
    def from_dict(cls, d: dict) -> "GradedRanks":
        if any(v < 0 for v in d.values()):
            raise ValueError("ranks are nonnegative")
        return cls(tuple(sorted((int(k), int(v)) for k, v in d.items() if v)))

    def as_dict(self) -> dict:
        return dict(self.ranks)

    def __getitem__(self, i: int) -> int:
        return self.as_dict().get(i, 0)

    def total(self) -> int:
        return sum(v for _, v in self.ranks)


@dataclass
class FilteredComplex:
    level: int
    generators: list  # good orbits
    differential: dict = field(default_factory=dict)  # generator index -> {index: coefficient}

    def degree(self, i: int) -> int:
        return self.generators[i].grading

    def chain_ranks(self) -> dict:
        out: dict = {}
        for g in self.generators:
            out[g.grading] = out.get(g.grading, 0) + 1
        return out

    def boundary_matrix(self, deg: int) -> list:
        """Matrix of the differential from degree ``deg`` to ``deg - 1``."""
        src = [i for i, g in enumerate(self.generators) if g.grading == deg]
        tgt = [i for i, g in enumerate(self.generators) if g.grading == deg - 1]
        return [[self.differential.get(s, {}).get(t, 0) for s in src] for t in tgt]

    def homology(self) -> GradedRanks:
        dims = self.chain_ranks()
        out = {}
        for deg, dim in dims.items():
            r_out = exact_rank(self.boundary_matrix(deg)) if dims.get(deg - 1) else 0
            r_in = exact_rank(self.boundary_matrix(deg + 1)) if dims.get(deg + 1) else 0
            out[deg] = dim - r_out - r_in
        return GradedRanks.from_dict(out)


def filtered_complex(spec: GroupSpec, N: int) -> FilteredComplex:
    gens = [o for o in enumerate_orbits(spec, N) if o.good]
    odd = [o.name for o in gens if o.grading % 2]
    if odd:
        raise ArithmeticError(f"good generators in odd degree: {odd}")
    # every generator has even degree and the differential has degree -1
    return FilteredComplex(N, gens, {i: {} for i in range(len(gens))})


def closed_form_ranks(m: int, N: int) -> dict:
    out = {2 * i: m for i in range(2 * N)}
    out[0] = m - 1
    out[4 * N - 2] = m - 1
    return out


def class_count(spec: GroupSpec) -> int:
    return len(conjugacy_classes(enumerate_group(spec)))


def filtered_homology_ranks(spec: GroupSpec, N: int) -> GradedRanks:
    ranks = filtered_complex(spec, N).homology()
    expected = GradedRanks.from_dict(closed_form_ranks(class_count(spec), N))
    if ranks != expected:
        raise ArithmeticError(f"filtered ranks {ranks.as_dict()} != closed form {expected.as_dict()}")
    return ranks


@dataclass
class InclusionMap:
    source: int
    target: int
    pairing: dict  # source generator index -> target generator index


def inclusion_map(spec: GroupSpec, N: int, M: int) -> InclusionMap:
    """Pair each level-N generator with the level-M generator over the same point and iterate."""
    if N > M:
        raise ValueError("need N <= M")
    src = filtered_complex(spec, N).generators
    tgt = filtered_complex(spec, M).generators
    where: dict = {}
    for j, g in enumerate(tgt):
        where.setdefault(g.key, []).append(j)
    pairing = {}
    for i, g in enumerate(src):
        hits = where.get(g.key, [])
        if len(hits) != 1:
            raise ArithmeticError(f"{g.name} has {len(hits)} partners at level {M}")
        j = hits[0]
        if tgt[j].grading != g.grading:
            raise ArithmeticError(f"{g.name} changes degree under inclusion")
        pairing[i] = j
    if len(set(pairing.values())) != len(pairing):
        raise ArithmeticError("inclusion is not injective")
    return InclusionMap(N, M, pairing)


def compose(outer: InclusionMap, inner: InclusionMap) -> InclusionMap:
    assert inner.target == outer.source
    return InclusionMap(inner.source, outer.target, {i: outer.pairing[j] for i, j in inner.pairing.items()})


@dataclass
class DirectLimit:
    ranks: GradedRanks  # stabilized degrees below the top filtration edge
    low_degree_rank: int  # m - 1
    stable_rank: int  # m in every even degree >= 2
    defect: int  # m - 2, the dimension of the Q^(m-2)[2i] summands
    defect_from_orbifold: int

    def summary(self) -> dict:
        return {"0": self.low_degree_rank, "even>=2": self.stable_rank}


def direct_limit(spec: GroupSpec, max_level: int = 4) -> DirectLimit:
    """Stabilized ranks over the directed system up to ``max_level``."""
    if max_level < 2:
        raise ValueError("the limit needs at least two levels to compare")
    levels = [filtered_homology_ranks(spec, N) for N in range(1, max_level + 1)]
    for N in range(1, max_level):
        inc = inclusion_map(spec, N, N + 1)
        if len(inc.pairing) != len(filtered_complex(spec, N).generators):
            raise ArithmeticError("inclusion is not total")
        lo, hi = levels[N - 1].as_dict(), levels[N].as_dict()
        for deg in range(0, 4 * N - 2):
            if lo.get(deg, 0) != hi.get(deg, 0):
                raise ArithmeticError(f"ranks do not stabilize in degree {deg}")
    top = levels[-1].as_dict()
    stable = {deg: r for deg, r in top.items() if deg < 4 * max_level - 2}
    m = class_count(spec)
    evens = {r for deg, r in stable.items() if deg >= 2}
    if stable.get(0) != m - 1 or evens != {m}:
        raise ArithmeticError(f"limit ranks {stable} do not match m = {m}")
    return DirectLimit(GradedRanks.from_dict(stable), m - 1, m, m - 2, rank_defect_sum(spec))


def mckay_rank_check(spec: GroupSpec, max_level: int = 4) -> bool:
    lim = direct_limit(spec, max_level)
    m = class_count(spec)
    return lim.stable_rank == m and lim.low_degree_rank == m - 1 and lim.defect_from_orbifold == m - 2


def homology_report(spec: GroupSpec, levels: int) -> dict:
    per_level = {str(N): {str(k): v for k, v in filtered_homology_ranks(spec, N).ranks} for N in range(1, levels + 1)}
    lim = direct_limit(spec, max(levels, 2))
    return {
        "filtered_ranks": per_level,
        "inclusions": [
            {"source": N, "target": N + 1, "generators": len(inclusion_map(spec, N, N + 1).pairing)}
            for N in range(1, levels)
        ],
        "direct_limit": lim.summary(),
        "decomposition": {"Q^(m-2)[2i]": lim.defect, "H_*(S^2)[2i]": 1,
                          "orbifold_defect_sum": lim.defect_from_orbifold},
        "mckay_check": mckay_rank_check(spec, max(levels, 2)),
    }
