"""Reference data used by the verification suites.

Class tables are written in residue form: ``{class: {orbit: [r, ...]}}``
meaning the iterates ``k = r (mod d)`` with ``k >= 1``.
"""

from __future__ import annotations

from .groups import GroupSpec

POLYHEDRAL_QUANTITIES = {
    "tetrahedral": {"H_order": 12, "V": 4, "E": 6, "F": 4, "I_V": 3, "I_E": 2, "I_F": 3, "conj": 7},
    "octahedral": {"H_order": 24, "V": 6, "E": 12, "F": 8, "I_V": 4, "I_E": 2, "I_F": 3, "conj": 8},
    "icosahedral": {"H_order": 60, "V": 12, "E": 30, "F": 20, "I_V": 5, "I_E": 2, "I_F": 3, "conj": 9},
}

_POLY_TABLES = {
    "tetrahedral": {
        "T_Id": {"V": [0], "E": [0], "F": [0]},
        "T_-Id": {"V": [3], "E": [2], "F": [3]},
        "T_4": {"E": [1, 3]},
        "T_6A": {"V": [1], "F": [5]},
        "T_6B": {"V": [5], "F": [1]},
        "T_3A": {"V": [2], "F": [4]},
        "T_3B": {"V": [4], "F": [2]},
    },
    "octahedral": {
        "O_Id": {"V": [0], "E": [0], "F": [0]},
        "O_-Id": {"V": [4], "E": [2], "F": [3]},
        "O_8A": {"V": [1, 7]},
        "O_8B": {"V": [3, 5]},
        "O_4A": {"V": [2, 6]},
        "O_4B": {"E": [1, 3]},
        "O_6": {"F": [1, 5]},
        "O_3": {"F": [2, 4]},
    },
    "icosahedral": {
        "I_Id": {"V": [0], "E": [0], "F": [0]},
        "I_-Id": {"V": [5], "E": [2], "F": [3]},
        "I_10A": {"V": [1, 9]},
        "I_10B": {"V": [3, 7]},
        "I_5A": {"V": [2, 8]},
        "I_5B": {"V": [4, 6]},
        "I_4": {"E": [1, 3]},
        "I_6": {"F": [1, 5]},
        "I_3": {"F": [2, 4]},
    },
}


def expected_class_table(spec: GroupSpec) -> dict:
    if spec.is_polyhedral:
        return {k: {o: list(r) for o, r in v.items()} for k, v in _POLY_TABLES[spec.family].items()}
    n = spec.n
    if spec.family == "cyclic":
        out = {"g^0": {"gamma_s": [0], "gamma_n": [0]}}
        for m in range(1, n):
            out[f"g^{m}"] = {"gamma_s": [n - m], "gamma_n": [m]}
        return out
    out = {
        "Id": {"e-": [0], "h": [0], "e+": [0]},
        "-Id": {"e-": [2], "h": [2], "e+": [n]},
    }
    for m in range(1, n):
        out[f"A^{m}"] = {"e+": [m, 2 * n - m]}
    if n % 2 == 0:
        out["B"] = {"h": [1, 3]}
        out["AB"] = {"e-": [1, 3]}
    else:
        out["B"] = {"h": [1], "e-": [3]}
        out["AB"] = {"e-": [1], "h": [3]}
    return out


def class_count(spec: GroupSpec) -> int:
    if spec.family == "cyclic":
        return spec.n
    if spec.family == "dihedral":
        return spec.n + 3
    return POLYHEDRAL_QUANTITIES[spec.family]["conj"]


def expected_census(spec: GroupSpec, N: int) -> dict:
    """Grading -> (total, good) orbit counts below L_N."""
    m = class_count(spec)
    out = {}
    for i in range(4 * N - 1):
        if i % 2:
            if spec.family != "cyclic":
                out[i] = (1, 0)
        elif i in (0, 4 * N - 2):
            out[i] = (m - 1, m - 1)
        else:
            out[i] = (m, m)
    return out


def normalize_table(table: dict) -> dict:
    return {k: {o: sorted(r) for o, r in v.items()} for k, v in table.items()}
