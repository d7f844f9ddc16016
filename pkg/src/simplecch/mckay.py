"""Character tables and McKay quivers of the finite subgroups of SU(2).

Characters come from the class-sum method: the central characters of the
irreducibles are the common eigenvectors of the class multiplication
matrices, so one diagonalization of a random combination of those
matrices yields the whole table.  Values are complex doubles guarded by
integrality and orthogonality checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .groups import FiniteSubgroup, GroupSpec, class_index, conjugacy_classes

TOL = 1e-8


class CharacterTableError(ArithmeticError):
    pass


@dataclass
class CharacterTable:
    classes: tuple
    characters: np.ndarray  # rows are irreducibles, columns follow ``classes``
    group_order: int

    @property
    def dims(self) -> list:
        return [int(round(v.real)) for v in self.characters[:, 0]]

    @property
    def sizes(self) -> np.ndarray:
        return np.array([c.size for c in self.classes])


def class_multiplication(G: FiniteSubgroup, classes: tuple) -> np.ndarray:
    """``c[r, s, t]``: number of ways a fixed element of class t is x y with x in r, y in s."""
    cidx = class_index(G)
    m = len(classes)
    c = np.zeros((m, m, m), dtype=np.int64)
    xs = np.arange(G.order)
    for t, cl in enumerate(classes):
        z = cl.representative
        ys = G.table[G.inverse[xs], z]
        np.add.at(c, (cidx[xs], cidx[ys], t), 1)
    return c


def character_table(G: FiniteSubgroup, seed: int = 0, attempts: int = 8) -> CharacterTable:
    classes = conjugacy_classes(G)
    m = len(classes)
    sizes = np.array([c.size for c in classes], dtype=float)
    c = class_multiplication(G, classes)
    rng = np.random.default_rng(seed)
    for _ in range(attempts):
        coef = rng.normal(size=m)
        mat = np.einsum("r,rst->st", coef, c.astype(float))
        vals, vecs = np.linalg.eig(mat)
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.eye(m)
        if gaps.min() > 1e-6:
            break
    else:
        raise CharacterTableError("class-sum eigenvalues stayed degenerate")
    # column j: central character w_t = |C_t| chi(g_t) / chi(1), scaled so w at Id is 1
    w = vecs / vecs[0, :]
    dims = np.sqrt(G.order / np.sum(np.abs(w) ** 2 / sizes[:, None], axis=0))
    chars = (w * dims[None, :] / sizes[:, None]).T
    chars = _sorted_rows(chars)
    table = CharacterTable(classes, chars, G.order)
    _check(table)
    return table


def _sorted_rows(chars: np.ndarray) -> np.ndarray:
    def key(row):
        rounded = np.round(row, 6) + 0.0
        return (round(row[0].real), tuple(-rounded.real), tuple(-rounded.imag))

    return np.array(sorted(chars, key=key))


def _check(table: CharacterTable) -> None:
    X = table.characters
    dims = X[:, 0]
    if np.max(np.abs(dims - np.round(dims.real))) > TOL or np.any(dims.real < 0.5):
        raise CharacterTableError("degrees are not positive integers")
    gram = (X * table.sizes[None, :]) @ X.conj().T
    if np.max(np.abs(gram - table.group_order * np.eye(len(X)))) > TOL * table.group_order:
        raise CharacterTableError("row orthogonality fails")
    if abs(np.sum(np.round(dims.real) ** 2) - table.group_order) > 1e-6:
        raise CharacterTableError("sum of squared degrees is not |G|")


def standard_character(G: FiniteSubgroup, classes: tuple) -> np.ndarray:
    """Trace of the defining representation, ``2 Re(alpha)``, per class."""
    return np.array([2 * G.alphas[c.representative].real for c in classes])


@dataclass
class McKayQuiver:
    dims: list
    adjacency: np.ndarray
    ade_label: str
    trivial: int = 0

    def graph(self) -> nx.Graph:
        return adjacency_graph(self.adjacency)

    def to_json(self) -> str:
        return json.dumps({"label": self.ade_label, "dims": self.dims,
                           "adjacency": self.adjacency.tolist()}, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["graph mckay {"]
        for i, d in enumerate(self.dims):
            lines.append(f'  n{i} [label="{d}"];')
        m = len(self.dims)
        for i in range(m):
            for j in range(i, m):
                for _ in range(int(self.adjacency[i, j]) if i != j else 0):
                    lines.append(f"  n{i} -- n{j};")
        lines.append("}")
        return "\n".join(lines)


def ade_type(spec: GroupSpec) -> str:
    if spec.family == "cyclic":
        return f"A~{spec.n - 1}"
    if spec.family == "dihedral":
        return f"D~{spec.n + 2}"
    return {"tetrahedral": "E~6", "octahedral": "E~7", "icosahedral": "E~8"}[spec.family]


def mckay_quiver(G: FiniteSubgroup) -> McKayQuiver:
    table = character_table(G)
    std = standard_character(G, table.classes)
    X = table.characters
    raw = (X * (table.sizes * std)[None, :]) @ X.conj().T / G.order
    adj = np.round(raw.real).astype(np.int64)
    if np.max(np.abs(raw - adj)) >= 1e-6:
        raise CharacterTableError("McKay multiplicities are not integers")
    trivial = int(np.argmin(np.max(np.abs(X - 1), axis=1)))
    return McKayQuiver(table.dims, adj, ade_type(G.spec), trivial)


def adjacency_graph(adj: np.ndarray) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(adj)))
    for i in range(len(adj)):
        for j in range(i + 1, len(adj)):
            if adj[i, j]:
                g.add_edge(i, j, weight=int(adj[i, j]))
    return g


def _star(arms: list) -> nx.Graph:
    g = nx.Graph()
    g.add_node(0)
    nxt = 1
    for length in arms:
        prev = 0
        for _ in range(length):
            g.add_edge(prev, nxt, weight=1)
            prev, nxt = nxt, nxt + 1
    return g


def dynkin_graph(label: str) -> nx.Graph:
    """Reference graph for ``A~n``, ``D~n``, ``E~n`` and the finite ``A n``, ``D n``, ``E n``."""
    kind, rank = label[0], int(label.rstrip("~").lstrip("ADE~ "))
    affine = "~" in label
    g = nx.Graph()
    if kind == "A":
        nodes = rank + 1 if affine else rank
        g.add_nodes_from(range(nodes))
        if affine and nodes == 2:
            g.add_edge(0, 1, weight=2)
        else:
            for i in range(nodes - 1):
                g.add_edge(i, i + 1, weight=1)
            if affine:
                g.add_edge(nodes - 1, 0, weight=1)
        return g
    if kind == "D":
        if affine:
            if rank == 4:
                return _star([1, 1, 1, 1])
            chain = rank - 3
            g.add_nodes_from(range(rank + 1))
            for i in range(chain - 1):
                g.add_edge(i, i + 1, weight=1)
            leaves = range(chain, chain + 4)
            for leaf, anchor in zip(leaves, (0, 0, chain - 1, chain - 1)):
                g.add_edge(anchor, leaf, weight=1)
            return g
        return _star([1, 1, rank - 3])
    arms = {6: [2, 2, 2], 7: [3, 3, 1], 8: [5, 2, 1]} if affine else {6: [2, 2, 1], 7: [3, 2, 1], 8: [4, 2, 1]}
    return _star(arms[rank])


def isomorphic(g1: nx.Graph, g2: nx.Graph) -> bool:
    return nx.is_isomorphic(g1, g2, edge_match=lambda a, b: a["weight"] == b["weight"])


@dataclass
class QuiverCheck:
    node_count: int
    class_count: int
    symmetric: bool
    weighted_regular: bool
    extended_match: bool
    finite_match: bool

    @property
    def passed(self) -> bool:
        return (self.node_count == self.class_count and self.symmetric and self.weighted_regular
                and self.extended_match and self.finite_match)


def check_quiver(G: FiniteSubgroup) -> QuiverCheck:
    q = mckay_quiver(G)
    adj = q.adjacency
    dims = np.array(q.dims)
    full = q.graph()
    finite = full.copy()
    finite.remove_node(q.trivial)
    label = q.ade_label
    fin_label = label.replace("~", " ")
    if label == "A~1":
        finite_ok = finite.number_of_nodes() == 1
    else:
        finite_ok = isomorphic(finite, dynkin_graph(fin_label))
    return QuiverCheck(
        node_count=len(adj),
        class_count=len(conjugacy_classes(G)),
        symmetric=bool(np.array_equal(adj, adj.T)),
        weighted_regular=bool(np.array_equal(adj @ dims, 2 * dims)),
        extended_match=nx.is_connected(full) and isomorphic(full, dynkin_graph(label)),
        finite_match=finite_ok,
    )
