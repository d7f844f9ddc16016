"""Command line: ``simplecch report`` and ``simplecch verify``.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources

from . import groups, homology, homotopy, mckay, morse_lab, orbifold, reeb
from .groups import GroupSpec, GroupSpecError, conjugacy_classes, enumerate_group, image_H
from .homology import direct_limit, filtered_homology_ranks, homology_report
from .mckay import check_quiver, mckay_quiver
from .reeb import degree_census, dynamical_convexity_check, enumerate_orbits, local_model_cz, orbit_table, threshold
from .reference import POLYHEDRAL_QUANTITIES, expected_census, expected_class_table, normalize_table

REPORT_SCHEMA = "simplecch.report/1"
VERIFY_SCHEMA = "simplecch.verify/1"
SUITES = ("tables", "prop42", "convexity", "badbuilding", "morse", "mckay", "all")


@dataclass
class RunConfig:
    group: GroupSpec
    levels: int = 2
    eps: float = 1e-4
    fmt: str = "json"
    suite: str = "all"
    max_level: int = 4
    d1_max: int = 10
    samples: int = 10**6


def _orbit_row(spec: GroupSpec, o, eps: float) -> dict:
    return {
        "name": o.name, "k": o.k, "c0": str(o.action.c0), "c1": str(o.action.c1),
        "action_at_eps": round(o.action.value(eps), 12),
        "cz": o.cz, "grading": o.grading, "kind": o.kind, "good": o.good,
        "contractible": o.contractible,
        "class": homotopy.class_label_of(spec, o.base, o.k),
    }


def build_report(cfg: RunConfig) -> dict:
    spec = cfg.group
    G = enumerate_group(spec)
    classes = conjugacy_classes(G)
    levels = []
    for N in range(1, cfg.levels + 1):
        census = degree_census(spec, N)
        levels.append({
            "N": N,
            "threshold_over_pi": str(threshold(spec, N)),
            "orbits": [_orbit_row(spec, o, cfg.eps) for o in enumerate_orbits(spec, N)],
            "census": {str(i): {"total": t, "good": g} for i, (t, g) in census.counts.items()},
            "ranks": {str(d): r for d, r in filtered_homology_ranks(spec, N).ranks},
        })
    hom = homology_report(spec, cfg.levels)
    quiver = mckay_quiver(G)
    return {
        "schema": REPORT_SCHEMA,
        "group": {
            "spec": str(spec), "order": G.order, "H_order": image_H(G).order,
            "classes": [{"label": c.label, "order": c.group_order_of_rep, "size": c.size} for c in classes],
        },
        "orbifold": orbifold.orbifold_dump(spec)["points"],
        "levels": levels,
        "direct_limit": hom["direct_limit"],
        "decomposition": hom["decomposition"],
        "class_table": normalize_table(homotopy.class_table(spec)),
        "mckay": {"label": quiver.ade_label, "nodes": len(quiver.dims),
                  "isomorphic": check_quiver(G).passed, "rank_check": hom["mckay_check"]},
    }


def report_markdown(cfg: RunConfig, rep: dict) -> str:
    spec = cfg.group
    out = [f"# {spec}", "", f"|G| = {rep['group']['order']}, |H| = {rep['group']['H_order']}, "
           f"|Conj(G)| = {len(rep['group']['classes'])}", "", "## Orbifold points", "",
           "| point | orbit | size | isotropy | index | d |", "|---|---|---|---|---|---|"]
    for p in rep["orbifold"]:
        out.append(f"| {p['name']} | {p['orbit']} | {p['orbit_size']} | {p['isotropy']} | "
                   f"{p['morse_index']} | {p['d']} |")
    for lev in rep["levels"]:
        N = lev["N"]
        out += ["", f"## Level N = {N}, L_N = ({lev['threshold_over_pi']}) pi", "",
                "| grading | index | orbits | c_i |", "|---|---|---|---|"]
        for row in orbit_table(spec, N):
            out.append(f"| {row['grading']} | {row['cz']} | {', '.join(row['orbits'])} | {row['count']} |")
        ranks = ", ".join(f"{d}: {r}" for d, r in lev["ranks"].items())
        out += ["", f"Filtered homology ranks: {{{ranks}}}"]
    lim = rep["direct_limit"]
    out += ["", "## Direct limit", "", f"Ranks: {{0: {lim['0']}, even >= 2: {lim['even>=2']}}}",
            "", "## Homotopy classes", "", homotopy.class_table_markdown(spec), "",
            "## McKay", "", f"{rep['mckay']['label']} with {rep['mckay']['nodes']} nodes; "
            f"isomorphic: {rep['mckay']['isomorphic']}; rank check: {rep['mckay']['rank_check']}"]
    return "\n".join(out) + "\n"


def load_schema(name: str) -> dict:
    """``name`` is ``report`` or ``verify``."""
    return json.loads(resources.files(__package__).joinpath("schema", f"{name}.schema.json").read_text())


def _check(name: str, passed: bool, detail="") -> dict:
    return {"name": name, "passed": bool(passed), "detail": detail}


def suite_tables(cfg: RunConfig) -> list:
    spec = cfg.group
    checks = []
    for N in range(1, cfg.max_level + 1):
        got = degree_census(spec, N).counts
        want = expected_census(spec, N)
        checks.append(_check(f"census N={N}", got == want, "" if got == want else str(got)))
        try:
            filtered_homology_ranks(spec, N)
            checks.append(_check(f"filtered ranks N={N}", True))
        except ArithmeticError as e:
            checks.append(_check(f"filtered ranks N={N}", False, str(e)))
    try:
        direct_limit(spec, cfg.max_level)
        checks.append(_check("direct limit", True))
    except ArithmeticError as e:
        checks.append(_check("direct limit", False, str(e)))
    got = normalize_table(homotopy.class_table(spec))
    want = normalize_table(expected_class_table(spec))
    checks.append(_check("class table", got == want, "" if got == want else json.dumps(got, sort_keys=True)))
    if spec.is_polyhedral:
        q = orbifold.polyhedral_quantities(spec)
        checks.append(_check("polyhedral quantities", q == POLYHEDRAL_QUANTITIES[spec.family], str(q)))
        checks.append(_check("conj = I_V + I_E + I_F - 1", q["conj"] == q["I_V"] + q["I_E"] + q["I_F"] - 1))
        for desc, ok in homotopy.antipodal_and_distinguish_checks(spec).items:
            checks.append(_check(desc, ok))
    return checks


def suite_prop42(cfg: RunConfig) -> list:
    checks = []
    for N in range(1, cfg.max_level + 1):
        for M in range(N, cfg.max_level + 1):
            bad = homotopy.verify_prop_cz_action(cfg.group, N, M)
            checks.append(_check(f"N={N} M={M}", not bad, [vars(b) for b in bad[:5]]))
    return checks


def suite_convexity(cfg: RunConfig) -> list:
    checks = []
    for N in range(1, cfg.max_level + 1):
        r = dynamical_convexity_check(cfg.group, N)
        checks.append(_check(f"N={N} ({r.checked} contractible)", r.passed, [list(v) for v in r.violations]))
    bad = [o.name for o in enumerate_orbits(cfg.group, 2) if local_model_cz(o, cfg.eps).cz != o.cz]
    checks.append(_check(f"local model CZ below L_2 at eps={cfg.eps}", not bad, bad))
    return checks


def suite_badbuilding(cfg: RunConfig) -> list:
    r = homotopy.bad_building_exclusion(cfg.group, cfg.d1_max)
    return [_check(f"d2={r.d2} d1={d1}", v == 2, v) for d1, v in r.indices.items()]


def suite_morse(cfg: RunConfig) -> list:
    run = morse_lab.run_morse_lab(cfg.group, cfg.samples)
    return [
        _check("critical set equals Fix(H)", run.fixed_point_match, list(run.index_counts)),
        _check("Smale", run.smale.passed, run.smale.saddle_connections),
        _check("orbifold Morse homology (1,0,1)", run.homology == (1, 0, 1), list(run.homology)),
    ]


def suite_mckay(cfg: RunConfig) -> list:
    q = check_quiver(enumerate_group(cfg.group))
    return [_check("McKay quiver", q.passed, vars(q))]


SUITE_FUNCS = {
    "tables": suite_tables, "prop42": suite_prop42, "convexity": suite_convexity,
    "badbuilding": suite_badbuilding, "morse": suite_morse, "mckay": suite_mckay,
}


def run_verify(cfg: RunConfig) -> dict:
    names = list(SUITE_FUNCS) if cfg.suite == "all" else [cfg.suite]
    suites = {}
    for name in names:
        try:
            suites[name] = SUITE_FUNCS[name](cfg)
        except ArithmeticError as e:
            suites[name] = [_check("suite raised", False, f"{type(e).__name__}: {e}")]
    passed = all(c["passed"] for checks in suites.values() for c in checks)
    return {"schema": VERIFY_SCHEMA, "group": str(cfg.group), "suites": suites, "passed": passed}


def verify_markdown(res: dict) -> str:
    out = [f"# verify {res['group']}", ""]
    for name, checks in res["suites"].items():
        for c in checks:
            out.append(f"- [{'PASS' if c['passed'] else 'FAIL'}] {name}: {c['name']}")
    out += ["", "PASS" if res["passed"] else "FAIL"]
    return "\n".join(out) + "\n"


def apply_tolerances(match_tol: float, fixed_tol: float, grad_tol: float, eig_tol: float) -> None:
    """Set the numeric tolerances and drop every cached result computed under the old ones."""
    homotopy.MATCH_TOL = match_tol
    orbifold.TOL = fixed_tol
    morse_lab.GRAD_TOL = grad_tol
    morse_lab.EIG_TOL = eig_tol
    clear_caches()


def clear_caches() -> None:
    for mod in (groups, orbifold, reeb, homotopy, homology, mckay, morse_lab):
        for obj in vars(mod).values():
            if callable(getattr(obj, "cache_clear", None)):
                obj.cache_clear()


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _group(text: str) -> GroupSpec:
    try:
        return GroupSpec.parse(text)
    except GroupSpecError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="simplecch", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--group", required=True, type=_group,
                        help="cyclic:N, dihedral:N, tetrahedral, octahedral or icosahedral")
        sp.add_argument("--format", choices=("json", "markdown"), default="json")
        sp.add_argument("--eps", type=float, default=1e-4, help="numeric epsilon for displays and local models")
        sp.add_argument("--match-tol", type=float, default=homotopy.MATCH_TOL,
                        help="fiber-rotation matching tolerance")
        sp.add_argument("--fixed-tol", type=float, default=orbifold.TOL, help="fixed-point tolerance")

    r = sub.add_parser("report", help="orbits, censuses, ranks and classes")
    common(r)
    r.add_argument("--levels", type=_positive, default=2)
    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--suite", choices=SUITES, default="all")
    v.add_argument("--max-level", type=_positive, default=4)
    v.add_argument("--d1-max", type=_positive, default=10)
    v.add_argument("--samples", type=_positive, default=10**6, help="Morse lab grid size")
    v.add_argument("--grad-tol", type=float, default=morse_lab.GRAD_TOL)
    v.add_argument("--eig-tol", type=float, default=morse_lab.EIG_TOL)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    apply_tolerances(match_tol=args.match_tol, fixed_tol=args.fixed_tol,
                     grad_tol=getattr(args, "grad_tol", morse_lab.GRAD_TOL),
                     eig_tol=getattr(args, "eig_tol", morse_lab.EIG_TOL))
    cfg = RunConfig(group=args.group, fmt=args.format, eps=args.eps)
    if args.command == "report":
        cfg.levels = args.levels
        rep = build_report(cfg)
        text = json.dumps(rep, sort_keys=True, indent=2) + "\n" if cfg.fmt == "json" else report_markdown(cfg, rep)
        sys.stdout.write(text)
        return 0
    cfg.suite, cfg.max_level, cfg.d1_max, cfg.samples = args.suite, args.max_level, args.d1_max, args.samples
    res = run_verify(cfg)
    text = json.dumps(res, sort_keys=True, indent=2) + "\n" if cfg.fmt == "json" else verify_markdown(res)
    sys.stdout.write(text)
    if not res["passed"]:
        for name, checks in res["suites"].items():
            for c in checks:
                if not c["passed"]:
                    print(f"FAIL {name}: {c['name']} {c['detail']}", file=sys.stderr)
    return 0 if res["passed"] else 1


if __name__ == "__main__":
    raise SystemExit(main())
