"""Command-line front end.

Every subcommand reads one JSON group configuration and writes its result to stdout;
diagnostics go to stderr.  Exit codes: 0 success, 1 failed ``check``, 2 usage or
configuration error, 3 element cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction
from typing import Callable

from . import admissible as admmod
from . import newton as nw
from . import strata as st
from .admissible import DEFAULT_CAP, CapExceeded, adm, check_comp_theorem, k_w_set
from .config import ConfigError, RunConfig, load_schema, parse_K_option
from .iwahori import NotQuasiSplit, iwahori_weyl
from .rootdata import RootDatumError

SCHEMA_ID = "ekorlab/v1"
EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _q(x) -> str:
    return str(Fraction(x))


def _qvec(v) -> list[str]:
    return [_q(x) for x in v]


def _ivec(v) -> list[int]:
    return [int(x) for x in v]


def _vec_text(v) -> str:
    return "[" + ",".join(str(Fraction(x)) for x in v) + "]"


def _nodes_json(nodes) -> list:
    return [list(n) for n in sorted(nodes)]


class Output:
    """Collects a text rendering and a JSON result for one command."""

    def __init__(self, command: str, cfg: RunConfig):
        self.command = command
        self.cfg = cfg
        self.lines: list[str] = []
        self.result: dict = {}

    def line(self, s: str = "") -> None:
        self.lines.append(s)

    def row(self, *cells) -> None:
        self.lines.append("\t".join(str(c) for c in cells))

    def document(self) -> dict:
        config = {"name": self.cfg.name, **self.cfg.to_dict()}
        if "K" in self.cfg.overrides:
            config["K"] = self.cfg.overrides["K"]
        return {"schema": SCHEMA_ID, "command": self.command, "config": config, "result": self.result}


# -- subcommands ----------------------------------------------------------------------------


def cmd_info(cfg: RunConfig, args, out: Output) -> int:
    d, s, mu, K = cfg.datum, cfg.sigma, cfg.mu, cfg.K
    W = iwahori_weyl(d)
    dia = nw.mu_diamond(d, mu, s)
    r = out.result
    r["types"] = [[f, n] for f, n in d.types]
    r["lattice"] = d.lattice_kind
    r["dim"] = d.dim
    r["positive_roots"] = d.N
    r["weyl_order"] = d.weyl_order
    r["omega"] = str(d.omega)
    r["omega_sigma"] = str(s.omega_sigma)
    r["sigma"] = {
        "delta": [[list(a), list(b)] for a, b in sorted(s.delta.items())],
        "tau": W.render(s.tau),
        "order": s.order,
        "stabilizes_W0": s.stabilizes_finite_weyl(),
        "affine_node_perm": [[list(a), list(b)] for a, b in sorted(s.affine_node_perm.items())],
    }
    r["mu"] = _ivec(mu)
    r["mu_diamond"] = _qvec(dia)
    r["mu_natural"] = _ivec(nw.mu_natural(d, mu, s))
    r["rho2_mu"] = _q(d.rho2_pairing(mu))
    r["K"] = _nodes_json(K.nodes)
    r["W_K_order"] = len(K.elements)
    out.row("name", cfg.name)
    out.row("types", " x ".join(f"{f}{n}" for f, n in d.types))
    out.row("lattice", d.lattice_kind)
    out.row("dim", d.dim)
    out.row("positive_roots", d.N)
    out.row("weyl_order", d.weyl_order)
    out.row("omega", d.omega)
    out.row("omega_sigma", s.omega_sigma)
    moved = {W.letter(a): W.letter(b) for a, b in sorted(s.delta.items()) if a != b}
    out.row("delta", " ".join(f"{a}->{b}" for a, b in moved.items()) or "id")
    out.row("tau", W.render(s.tau))
    out.row("sigma_order", s.order)
    out.row("sigma_stabilizes_W0", str(s.stabilizes_finite_weyl()).lower())
    out.row("mu", _vec_text(mu))
    out.row("mu_diamond", f"{_vec_text(dia)} = {nw.format_nu(d, dia)}")
    out.row("mu_natural", _vec_text(r["mu_natural"]))
    out.row("<mu,2rho>", r["rho2_mu"])
    out.row("K", K.label())
    out.row("|W_K|", len(K.elements))
    return EXIT_OK


def _adm(cfg: RunConfig, args):
    if args.oracle:
        from .oracle import adm_oracle, to_main

        W = iwahori_weyl(cfg.datum)
        mu = admmod.normalize_mu(cfg.datum, cfg.mu)
        return frozenset(to_main(W, x) for x in adm_oracle(cfg.datum, mu))
    return adm(cfg.datum, cfg.mu, args.cap)


def cmd_adm(cfg: RunConfig, args, out: Output) -> int:
    d = cfg.datum
    W = iwahori_weyl(d)
    elems = sorted(_adm(cfg, args), key=lambda x: x.sort_key())
    out.result["count"] = len(elems)
    if args.count_only:
        out.line(str(len(elems)))
        return EXIT_OK
    out.result["elements"] = []
    out.row("element", "length", "omega")
    for x in elems:
        om = W.omega_component(x)
        out.result["elements"].append({"element": W.render(x), "length": x.length, "omega": _ivec(om)})
        out.row(W.render(x), x.length, _vec_text(om))
    return EXIT_OK


def _straight(cfg: RunConfig, args) -> Callable:
    if not args.oracle:
        return lambda x: nw.is_sigma_straight(x, cfg.sigma)
    from .oracle import OracleFrobenius, OracleGroup, from_main, straight_oracle

    G = OracleGroup(cfg.datum)
    F = OracleFrobenius(G, cfg.sigma.D, cfg.sigma.omega_lift)
    return lambda x: straight_oracle(G, from_main(x), F, cfg.datum.weyl_order)


def cmd_bgmu(cfg: RunConfig, args, out: Output) -> int:
    d, s, mu = cfg.datum, cfg.sigma, cfg.mu
    W = iwahori_weyl(d)
    classes = nw.b_g_mu(d, mu, s, args.cap)
    top = nw.b_max(d, mu, s, classes=classes)
    dia = nw.mu_diamond(d, mu, s)
    straight = _straight(cfg, args)
    rows = []
    for b in classes:
        rows.append({
            "nu": _qvec(b.nu),
            "nu_coweights": nw.format_nu(d, b.nu),
            "kappa": _ivec(b.kappa),
            "representative": W.render(b.representative),
            "length": b.representative.length,
            "straight": bool(straight(b.representative)),
            "is_max": b is top,
            "virtual_dim": _q(nw.virtual_dim(d, mu, b.nu)),
        })
    out.result.update({"classes": rows, "mu_diamond": _qvec(dia),
                       "mu_ordinary_exists": nw.mu_ordinary_exists(d, mu, s)})
    out.row("nu", "nu_raw", "kappa", "representative", "length", "straight", "is_max", "virtual_dim")
    for r in rows:
        out.row(r["nu_coweights"], _vec_text(r["nu"]), _vec_text(r["kappa"]), r["representative"], r["length"],
                str(r["straight"]).lower(), str(r["is_max"]).lower(), r["virtual_dim"])
    out.line(f"# mu_diamond = {nw.format_nu(d, dia)}; mu-ordinary exists: "
             f"{str(out.result['mu_ordinary_exists']).lower()}")
    return EXIT_OK


def cmd_density(cfg: RunConfig, args, out: Output) -> int:
    d, s, mu, K = cfg.datum, cfg.sigma, cfg.mu, cfg.K
    W = iwahori_weyl(d)
    v = st.is_dense(d, mu, K, s)
    if args.oracle:
        straight = _straight(cfg, args)
        if all(straight(t) for t in v.maximal_strata) != v.dense:
            raise RuntimeError("oracle straightness disagrees with the main implementation")
    r = out.result
    r["dense"] = v.dense
    r["K"] = _nodes_json(K.nodes)
    r["maximal_strata"] = [_ivec(t.lam) for t in v.maximal_strata]
    r["ordinary_strata"] = [_ivec(t.lam) for t in v.ordinary_strata]
    r["witness"] = _ivec(v.witness.lam) if v.witness is not None else None
    r["qs_criterion"] = v.qs_criterion
    head = f"dense: {str(v.dense).lower()}"
    if v.witness is not None:
        head += f"; witness: μ' = {_vec_text(v.witness.lam)}"
    out.line(head)
    out.line(f"# K = {K.label()}; product criterion: "
             f"{'n/a' if v.qs_criterion is None else str(v.qs_criterion).lower()}")
    out.row("mu_prime", "element", "straight")
    for t in v.maximal_strata:
        out.row(_vec_text(t.lam), W.render(t), str(t in v.ordinary_strata).lower())
    return EXIT_OK


def cmd_ekor_max(cfg: RunConfig, args, out: Output) -> int:
    d, s, mu, K = cfg.datum, cfg.sigma, cfg.mu, cfg.K
    W = iwahori_weyl(d)
    top = nw.b_max(d, mu, s, args.cap)
    cands = st.bmax_straight_elements(d, mu, s, args.cap, top)
    rows = []
    for t in st.maximal_ekor(d, mu, K):
        meet = st.max_newton_meets_stratum(d, t.lam, mu, s, args.cap, candidates=cands)
        rows.append({"mu_prime": _ivec(t.lam), "element": W.render(t),
                     "straight": nw.is_sigma_straight(t, s), "meets_b_max": meet.holds,
                     "witness": W.render(meet.witness) if meet.witness is not None else None})
    group = all(r["meets_b_max"] for r in rows)
    out.result.update({"strata": rows, "b_max_nu": _qvec(top.nu), "group_density": group})
    out.line(f"# K = {K.label()}; b_max nu = {nw.format_nu(d, top.nu)}")
    out.row("mu_prime", "element", "straight", "meets_b_max", "witness")
    for r in rows:
        out.row(_vec_text(r["mu_prime"]), r["element"], str(r["straight"]).lower(),
                str(r["meets_b_max"]).lower(), r["witness"] or "-")
    out.line(f"# group-theoretic density of the maximal Newton stratum: {str(group).lower()}")
    return EXIT_OK


def cmd_poset(cfg: RunConfig, args, out: Output) -> int:
    d, s, mu, K = cfg.datum, cfg.sigma, cfg.mu, cfg.K
    W = iwahori_weyl(d)
    if not K.is_sigma_stable(s):
        print(f"warning: K = {K.label()} is not sigma-stable", file=sys.stderr)
    g = st.ekor_poset(d, mu, K, s, args.cap)
    nodes = []
    for n, data in sorted(g.nodes(data=True)):
        nodes.append({"id": n, "element": W.render(data["element"]), "length": data["length"],
                      "nu": _qvec(data["nu"]), "kappa": _ivec(data["kappa"]),
                      "straight": bool(data["straight"]), "in_b_max": bool(data["in_bmax"])})
    edges = sorted([a, b] for a, b in g.edges())
    out.result.update({"nodes": nodes, "edges": edges})
    if args.format == "dot":
        out.line("digraph ekor {")
        out.line("  rankdir=BT;")
        out.line("  node [shape=circle, fontsize=10];")
        for nd in nodes:
            label = f"{nd['element']}|{nd['length']}|{nw.format_nu(d, [Fraction(x) for x in nd['nu']])}"
            shape = "doublecircle" if nd["straight"] else "circle"
            label = label.replace('"', '\\"')
            out.line(f'  n{nd["id"]} [label="{label}", shape={shape}];')
        for a, b in edges:
            out.line(f"  n{a} -> n{b};")
        out.line("}")
    else:
        out.row("id", "element", "length", "nu", "kappa", "straight", "in_b_max")
        for nd in nodes:
            out.row(nd["id"], nd["element"], nd["length"], _vec_text(nd["nu"]), _vec_text(nd["kappa"]),
                    str(nd["straight"]).lower(), str(nd["in_b_max"]).lower())
        out.line("# edges (lower -> upper)")
        for a, b in edges:
            out.row(a, b)
    if args.figure:
        from .plotting import draw_hasse

        draw_hasse(g, args.figure, title=f"{cfg.name}: K = {K.label()}")
        print(f"wrote {args.figure}", file=sys.stderr)
    return EXIT_OK


def cmd_classify(cfg: RunConfig, args, out: Output) -> int:
    d, s, mu = cfg.datum, cfg.sigma, cfg.mu
    res = st.classify_star(d, s, mu)
    card = None
    if s.stabilizes_finite_weyl() and len(d.components) == 1:
        card = st.cardinality_criterion(d, s, mu)
    out.result.update({"holds": res.holds, "case": res.case, "quasi_split": res.quasi_split,
                       "cardinality_criterion": card})
    out.row("holds", str(res.holds).lower())
    out.row("case", res.case)
    out.row("quasi_split", "n/a" if res.quasi_split is None else str(res.quasi_split).lower())
    out.row("cardinality_criterion", "n/a" if card is None else str(card).lower())
    return EXIT_OK


def run_checks(cfg: RunConfig, cap: int = DEFAULT_CAP, use_oracle: bool = False) -> list[tuple[str, bool, str]]:
    """Cross-validation checks on one configuration: (name, passed, detail)."""
    d, s, mu, K = cfg.datum, cfg.sigma, cfg.mu, cfg.K
    W = iwahori_weyl(d)
    mu = admmod.normalize_mu(d, mu)
    A = adm(d, mu, cap)
    ordered = sorted(A, key=lambda x: x.sort_key())
    sample = ordered if len(ordered) <= 400 else ordered[:: max(1, len(ordered) // 400)]
    results = []

    def record(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    record("comp_theorem", check_comp_theorem(d, mu, K, cap), f"K = {K.label()}")
    missing = [z for x in A for z in W.lower_covers(x) if z not in A]
    record("adm_down_closed", not missing, f"{len(A)} elements")
    top_len = d.rho2_pairing(mu)
    tops = {x for x in A if x.length == top_len}
    trans = set(admmod.maximal_translations(d, mu))
    record("adm_maximal_translations", tops == trans and max(x.length for x in A) == top_len,
           f"{len(trans)} translations of length {top_len}")
    kw = k_w_set(d, mu, K, cap)
    record("k_minimal_reps", all(admmod.K_minimal_rep(x, K) == x for x in kw), f"{len(kw)} elements")
    record("sigma_length_preserving", all(s.apply(x).length == x.length for x in sample))
    pairs = list(zip(sample, reversed(sample)))
    record("sigma_homomorphism", all(s.apply(x * y) == s.apply(x) * s.apply(y) for x, y in pairs))
    record("newton_bound", all(nw.newton_data(x, s)[1] <= x.length for x in sample))
    record("straight_characterizations",
           all(nw.is_sigma_straight(x, s) == nw.straight_additivity_check(x, s) for x in sample))
    classes = nw.b_g_mu(d, mu, s, cap)
    target = nw.mu_pair(d, mu, s)
    record("bgmu_acceptable", all(nw.dominance_leq(d, b.pair, target) for b in classes),
           f"{len(classes)} classes")
    try:
        top = nw.b_max(d, mu, s, classes=classes)
        record("b_max_unique", True, nw.format_nu(d, top.nu))
        record("mu_ordinary_routes", nw.mu_ordinary_exists(d, mu, s) == (top.nu == target.nu))
    except nw.NoUniqueMax as exc:
        record("b_max_unique", False, str(exc))
    if s.stabilizes_finite_weyl() and K.is_sigma_stable(s):
        try:
            v = st.is_dense(d, mu, K, s)
            record("density_criteria_agree", v.qs_criterion == v.dense)
        except RuntimeError as exc:
            record("density_criteria_agree", False, str(exc))
        fixed = {u.perm for u in st.fixed_weyl_group(d, s)}
        brute = {u.perm for u in st.fixed_weyl_group_bruteforce(d, s)}
        record("fixed_weyl_group", fixed == brute, f"order {len(fixed)}")
    if K.is_sigma_stable(s) and len(kw) <= 300:
        g = st.ekor_poset(d, mu, K, s, cap, classes)
        maximal = {g.nodes[n]["element"] for n in g.nodes if g.out_degree(n) == 0}
        record("poset_maxima", maximal == set(st.maximal_ekor(d, mu, K)))
        record("poset_edges_increase_length",
               all(g.nodes[a]["length"] < g.nodes[b]["length"] for a, b in g.edges()))
    if use_oracle:
        from .oracle import OracleFrobenius, OracleGroup, adm_oracle, bruhat_oracle, from_main, straight_oracle

        G = OracleGroup(d)
        record("oracle_adm", {from_main(x) for x in A} == adm_oracle(d, mu))
        small = sample[:60]
        record("oracle_bruhat", all(W.bruhat_leq(x, y) == bruhat_oracle(G, from_main(x), from_main(y))
                                    for x in small for y in small))
        F = OracleFrobenius(G, s.D, s.omega_lift)
        record("oracle_straight", all(nw.is_sigma_straight(x, s) ==
                                      straight_oracle(G, from_main(x), F, d.weyl_order) for x in small))
    return results


def cmd_check(cfg: RunConfig, args, out: Output) -> int:
    results = run_checks(cfg, args.cap, args.oracle)
    ok = all(p for _, p, _ in results)
    out.result.update({"passed": ok, "checks": [{"name": n, "passed": p, "detail": dt} for n, p, dt in results]})
    for name, passed, detail in results:
        out.row("PASS" if passed else "FAIL", name, detail)
    out.line(f"# {sum(p for _, p, _ in results)}/{len(results)} checks passed")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {
    "info": (cmd_info, "summarise the root datum, Frobenius and coweight"),
    "adm": (cmd_adm, "list the admissible set"),
    "bgmu": (cmd_bgmu, "tabulate B(G, mu) with straight representatives"),
    "density": (cmd_density, "density of the mu-ordinary locus for the configured K"),
    "ekor-max": (cmd_ekor_max, "maximal EKOR strata against the maximal Newton class"),
    "poset": (cmd_poset, "EKOR closure poset as a table, DOT or JSON"),
    "classify": (cmd_classify, "is every t^{mu'} sigma-straight, and which case applies"),
    "check": (cmd_check, "run the cross-validation checks on a configuration"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("config", help="path to a JSON group configuration")
    common.add_argument("--K", dest="K", default=None,
                        help='override the parahoric: comma-separated node ids ("1,3", "0_1,1_2"), or "iwahori"')
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("--json", dest="format", action="store_const", const="json",
                        help="shorthand for --format json")
    common.add_argument("--dot", dest="format", action="store_const", const="dot",
                        help="shorthand for --format dot")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="element cap for enumerations")
    common.add_argument("--oracle", action="store_true", help="cross-check with the brute-force reference code")
    parser = argparse.ArgumentParser(prog="ekorlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, helptext) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helptext)
        if name == "adm":
            p.add_argument("--count-only", action="store_true", help="print only the cardinality")
        if name == "poset":
            p.add_argument("--figure", metavar="PATH", help="also render the Hasse diagram to an image file")
    return parser


def _warning_to_stderr(message, category, filename, lineno, file=None, line=None):
    print(f"warning: {message}", file=sys.stderr)


def run(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.format == "dot" and args.command != "poset":
        print("error: --format dot is only available for 'poset'", file=sys.stderr)
        return EXIT_USAGE
    old = warnings.showwarning
    warnings.showwarning = _warning_to_stderr
    try:
        cfg = RunConfig.load(args.config)
        if args.K is not None:
            cfg = cfg.with_K(parse_K_option(args.K))
        func = COMMANDS[args.command][0]
        out = Output(args.command, cfg)
        code = func(cfg, args, out)
    except (ConfigError, RootDatumError, NotQuasiSplit) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    finally:
        warnings.showwarning = old
    if args.format == "json":
        doc = out.document()
        stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        stdout.write("\n".join(out.lines) + "\n")
    return code


def validate_output(doc: dict) -> None:
    """Raise jsonschema.ValidationError if ``doc`` does not match the v1 output schema."""
    import jsonschema

    jsonschema.Draft202012Validator(load_schema("v1.json")).validate(doc)


def main() -> None:
    try:
        code = run()
        sys.stdout.flush()
    except BrokenPipeError:
        # the reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = EXIT_OK
    sys.exit(code)


if __name__ == "__main__":
    main()
