"""Command-line harness: ``mirrorcount <subcommand> [flags]``.

Exit codes: 0 every verdict passed, 1 a verdict failed, 2 inconclusive,
budget exceeded, or invalid input.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import experiment as ex
from . import hodge, report, varieties, zeta
from .cache import CountCache, default_cache_dir
from .congruence import fmt_ord, verify_congruence
from .errors import BudgetError, MirrorCountError, ValidationError
from .records import CountSequence

LAMBDA_HELP = (
    "lambda as an integer c, read as c*1 in F_q when a = 1; for a > 1 a comma-separated "
    "coefficient vector c0,c1,... meaning c0 + c1*alpha + ..., alpha a root of the "
    "lexicographically smallest monic irreducible of degree a over F_p (constant term first)"
)


class Runner:
    """Count pipeline for one config, backed by the optional cache."""

    def __init__(self, cfg: ex.ExperimentConfig, cache: CountCache | None = None):
        self.cfg = cfg
        self.cache = cache

    def _key(self, kind, k, twist="id"):
        c = self.cfg
        return {"kind": kind, "p": c.p, "a": c.a, "n": c.n, "terms": c.equation_terms(),
                "twist": twist, "k": k}

    def _cached(self, key, compute):
        if self.cache is not None:
            hit = self.cache.get(key)
            if hit is not None:
                return hit
        rec = compute()
        if self.cache is not None:
            self.cache.put(key, rec.value, rec.provenance, self.cfg.report_config())
        return rec.value, rec.provenance

    def count(self, k):
        key = self._key("count", k)
        return self._cached(key, lambda: ex.compute_count(self.cfg, k))

    def quotient(self, k, method="burnside"):
        key = self._key(f"quotient-{method}", k, f"group:{self.cfg.group}")
        return self._cached(key, lambda: ex.compute_quotient(self.cfg, k, method))


def recompute_entry(key, config):
    cfg = ex.config_from_dict(config)
    kind, k = key["kind"], key["k"]
    if kind == "count":
        return ex.compute_count(cfg, k).value
    method = kind.split("-", 1)[1]
    return ex.compute_quotient(cfg, k, method).value


# -- argument parsing --------------------------------------------------------

def _common(parser, family="dwork", group="corollary03", kmax=1):
    parser.add_argument("--p", type=int, required=True, help="characteristic")
    parser.add_argument("--a", type=int, default=1, help="q = p^a")
    parser.add_argument("--n", type=int, default=2, help="ambient projective dimension")
    parser.add_argument("--family", choices=ex.FAMILIES, default=family)
    parser.add_argument("--lambda", dest="lam", default="0", help=LAMBDA_HELP)
    parser.add_argument("--coeffs", default=None,
                        help="diagonal coefficients, ';'-separated field elements (same rules as --lambda)")
    parser.add_argument("--degree", type=int, default=None, help="degree of a diagonal family")
    parser.add_argument("--kmax", type=int, default=kmax)
    parser.add_argument("--group", default=group,
                        help="corollary03 | trivial | perm:1,0,2;1,2,0 (generators as images of 0..n)")
    parser.add_argument("--strategy", default="auto", choices=["auto", *sorted(varieties.STRATEGIES)])
    parser.add_argument("--workers", type=int, default=1, help="thread count (does not change results)")
    parser.add_argument("--budget", type=int, default=varieties.DEFAULT_BUDGET,
                        help="maximum enumeration size")
    parser.add_argument("--cache-dir", default=None,
                        help="count cache directory (default: $MIRRORCOUNT_CACHE_DIR, unset = no cache)")
    parser.add_argument("--no-cache", action="store_true")
    parser.add_argument("--verify-cache", action="store_true",
                        help="recompute a seeded 5%% sample of cached counts before running")
    parser.add_argument("--allow-singular", action="store_true",
                        help="run congruence checks on singular members (drops the smoothness assumption)")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", default=None, help="write the report here instead of stdout")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mirrorcount",
        description="Exact point counts of Dwork-type hypersurfaces and their quotients, with congruence checks.",
        epilog="exit codes: 0 all verdicts pass, 1 a verdict failed, 2 inconclusive, budget or invalid input",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="N_k = #X(F_{q^k}) for k = 1..kmax")
    _common(p)

    p = sub.add_parser("twisted-count", help="Lambda(g F^k), fixed points of a twisted Frobenius")
    _common(p)
    p.add_argument("--g", required=True, help="scalings zeta_0;...;zeta_n (field elements)")
    p.add_argument("--perm", default=None, help="coordinate permutation, images of 0..n")
    p.add_argument("--method", default="auto", choices=["auto", "chart", "brute", "closed-form"])

    p = sub.add_parser("quotient-count", help="#(X/G)(F_{q^k}) by Burnside and/or the orbit oracle")
    _common(p)
    p.add_argument("--quotient-method", choices=ex.QUOTIENT_METHODS, default="burnside")

    p = sub.add_parser("verify-congruence", help="N_k(X) = N_k(X/G) mod q^k")
    _common(p, kmax=4)

    p = sub.add_parser("verify-unit", help="N_k = 1 mod q^k for X and X/G")
    _common(p, family="pn", group="trivial", kmax=4)

    p = sub.add_parser("zeta-fit", help="rational zeta ratio from counts")
    _common(p, kmax=4)
    p.add_argument("--counts", default=None, help="explicit N_1,...,N_L instead of counting")
    p.add_argument("--difference", action="store_true", help="fit D_k = N_k(X) - N_k(X/G)")
    p.add_argument("--genus", type=int, default=None, help="fit a smooth-curve zeta of this genus")

    p = sub.add_parser("newton-hodge", help="Newton polygon of the curve numerator against its Hodge polygon")
    _common(p)

    p = sub.add_parser("smoothness", help="smooth and singular Dwork members, closed form vs Jacobian search")
    _common(p)
    p.add_argument("--search-degree", type=int, default=None, help="default n+1")
    p.add_argument("--no-oracle", action="store_true")

    p = sub.add_parser("hodge-numbers", help="primitive middle Hodge numbers of a degree-d hypersurface")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output", default=None)
    return parser


def config_from_args(args) -> ex.ExperimentConfig:
    lam = ex.parse_scalar_text(args.lam, args.p, args.a)
    coeffs = None
    if args.coeffs:
        coeffs = tuple(ex.parse_scalar_text(c, args.p, args.a) for c in args.coeffs.split(";"))
    return ex.ExperimentConfig(
        p=args.p, a=args.a, n=args.n, family=args.family, lam=lam, coeffs=coeffs,
        degree=args.degree, kmax=args.kmax, group=args.group, strategy=args.strategy,
        quotient_method=getattr(args, "quotient_method", "burnside"),
        workers=args.workers, budget=args.budget,
    )


def _cache_for(args, cfg):
    if args.no_cache:
        return None
    directory = args.cache_dir or default_cache_dir()
    if not directory:
        return None
    return CountCache(directory, cfg.p, cfg.a, ex.ENGINE_VERSION)


def _base(command, cfg):
    return {"command": command, "engine": ex.ENGINE_VERSION, "config": cfg.report_config()}


def _require_smooth(args, cfg):
    if ex.is_smooth(cfg):
        return list(ex.ASSUMPTIONS)
    if not args.allow_singular:
        raise ValidationError("the member is singular; pass --allow-singular to run anyway")
    return ["singular-member-allowed", "lifting-hypothesis-assumed"]


# -- subcommands -------------------------------------------------------------

def cmd_count(args, cfg, runner):
    rows = []
    for k in range(1, cfg.kmax + 1):
        v, prov = runner.count(k)
        rows.append({"k": k, "N_k": str(v), "provenance": prov})
    rep = _base("count", cfg)
    rep.update(counts=rows, table=rows, verdicts={"overall": "pass"})
    return rep


def cmd_twisted(args, cfg, runner):
    scal = [ex.parse_scalar_text(s, cfg.p, cfg.a) for s in args.g.split(";")]
    perm = tuple(int(s) for s in args.perm.split(",")) if args.perm else None
    rows = []
    for k in range(1, cfg.kmax + 1):
        rec = ex.compute_twisted(cfg, scal, perm, k, args.method)
        rows.append({"k": k, "Lambda": str(rec.value), "provenance": rec.provenance})
    rep = _base("twisted-count", cfg)
    rep.update(twist={"scalings": [list(s) for s in scal], "permutation": list(perm) if perm else None},
               counts=rows, table=rows, verdicts={"overall": "pass"})
    return rep


def cmd_quotient(args, cfg, runner):
    methods = ["burnside", "orbit"] if cfg.quotient_method == "both" else [cfg.quotient_method]
    rows, statuses = [], []
    for k in range(1, cfg.kmax + 1):
        vals = [runner.quotient(k, m) for m in methods]
        row = {"k": k, "N_k": str(vals[0][0]), "provenance": vals[0][1]}
        if len(vals) == 2:
            row["orbit_oracle"] = str(vals[1][0])
            row["agree"] = vals[0][0] == vals[1][0]
            statuses.append("pass" if row["agree"] else "fail")
        rows.append(row)
    rep = _base("quotient-count", cfg)
    rep.update(counts=rows, table=rows, group_order=str(ex.group_order(cfg)),
               verdicts={"overall": report.overall(statuses)})
    return rep


def _sequences(cfg, runner, quotient_needed=True):
    xs, qs = [], []
    for k in range(1, cfg.kmax + 1):
        xs.append(runner.count(k))
        if quotient_needed:
            qs.append(runner.quotient(k, "burnside"))
    return xs, qs


def _congruence_report(command, cfg, xs, qs, mode, order, assumptions):
    sx = CountSequence(cfg.p, cfg.a, [v for v, _ in xs])
    sq = CountSequence(cfg.p, cfg.a, [v for v, _ in qs])
    res = verify_congruence(sx, sq, mode, order)
    counts, diffs, ords, table = [], [], [], []
    for e, (_, px), (_, pq) in zip(res.entries, xs, qs):
        counts.append({"k": e.k, "N_X": str(e.n_x), "N_quotient": str(e.n_quotient),
                       "provenance_X": px, "provenance_quotient": pq})
        diffs.append({"k": e.k, "difference": str(e.difference)})
        o = {"k": e.k, "difference": fmt_ord(e.ord_difference), "pass": e.passes,
             "pass_k_minus_c": e.passes_intermediate}
        if mode == "theorem04":
            o["N_X_minus_1"] = fmt_ord(e.ord_unit)
            o["pass_unit"] = e.passes_unit
        ords.append(o)
        row = {"k": e.k, "N_k": str(e.n_x), "provenance": px, "N_quotient": str(e.n_quotient),
               "quotient_provenance": pq, "difference": str(e.difference),
               "ord_q": fmt_ord(e.ord_difference), "pass": e.passes}
        if mode == "theorem04":
            row["ord_q_N_minus_1"] = fmt_ord(e.ord_unit)
            row["pass_unit"] = e.passes_unit
        table.append(row)
    verdicts = {name: ("pass" if ok else "fail") for name, ok in res.verdicts().items()}
    main = "theorem04" if mode == "theorem04" else "theorem01"
    verdicts["overall"] = verdicts[main]
    rep = _base(command, cfg)
    rep.update(counts=counts, differences=diffs, ord_q=ords, verdicts=verdicts,
               assumptions=assumptions, group_order=str(order), c=str(res.c), table=table)
    return rep


def cmd_verify_congruence(args, cfg, runner):
    assumptions = _require_smooth(args, cfg)
    xs, qs = _sequences(cfg, runner)
    return _congruence_report("verify-congruence", cfg, xs, qs, "theorem01", ex.group_order(cfg), assumptions)


def cmd_verify_unit(args, cfg, runner):
    assumptions = _require_smooth(args, cfg)
    trivial = cfg.group == "trivial"
    xs, qs = _sequences(cfg, runner, quotient_needed=not trivial)
    if trivial:
        qs = list(xs)
    return _congruence_report("verify-unit", cfg, xs, qs, "theorem04", ex.group_order(cfg), assumptions)


def _parse_counts(text):
    try:
        return [int(s) for s in text.split(",")]
    except ValueError as exc:
        raise ValidationError(f"cannot parse counts {text!r}") from exc


def cmd_zeta_fit(args, cfg, runner):
    if args.counts:
        values = _parse_counts(args.counts)
        source = "explicit"
    else:
        xs, qs = _sequences(cfg, runner, quotient_needed=args.difference)
        values = [v for v, _ in xs]
        if args.difference:
            values = [x - y for x, (y, _) in zip(values, qs)]
        source = "difference" if args.difference else "counts"
    seq = CountSequence(cfg.p, cfg.a, values)
    Z = zeta.fit_curve(seq, args.genus) if args.genus is not None else zeta.fit_ratio(seq)
    statuses = []
    rep = _base("zeta-fit", cfg)
    rep.update(source=source, counts=[{"k": k, "N_k": str(v)} for k, v in seq.entries()], ratio=Z.to_dict())
    if Z.status == "inconclusive":
        statuses.append("inconclusive")
    elif Z.status == "inconsistent":
        statuses.append("fail")
    if Z.numerator is not None:
        div = zeta.check_root_divisibility(Z, cfg.p, cfg.a)
        rep["divisibility"] = div
        rep["squarefree"] = {"numerator": zeta.is_squarefree(Z.numerator),
                             "denominator": zeta.is_squarefree(Z.denominator)}
        rep["newton_slopes"] = {
            "numerator": [str(s) for s in zeta.newton_polygon(Z.numerator, cfg.p, cfg.a).slopes],
            "denominator": [str(s) for s in zeta.newton_polygon(Z.denominator, cfg.p, cfg.a).slopes],
        }
        if source == "difference":
            statuses.append(div["verdict"])
        if args.genus is not None:
            sanity = zeta.curve_sanity(Z, cfg.p, cfg.a, args.genus)
            rep["curve_sanity"] = sanity
            statuses.append(sanity["verdict"])
    rep["table"] = [{"k": k, "N_k": str(v), "provenance": source} for k, v in seq.entries()]
    rep["verdicts"] = {"overall": report.overall(statuses)}
    return rep


def classify_slopes(slopes):
    if list(slopes) == [Fraction(1, 2)] * 2:
        return "supersingular"
    if list(slopes) == [0, 1]:
        return "ordinary"
    return "other"


def cmd_newton_hodge(args, cfg, runner):
    n, d = cfg.n, cfg.equation_degree
    H = hodge.hodge_numbers_hypersurface(n, d)
    rep = _base("newton-hodge", cfg)
    rep["hodge"] = H.to_dict()
    rep["hodge_polygon"] = hodge.hodge_polygon(H).to_dict()
    if n != 2 or d != 3 or cfg.family == "pn":
        rep["newton_comparison"] = "out-of-scope"
        rep["verdicts"] = {"overall": "pass"}
        return rep
    _require_smooth(args, cfg)
    xs, _ = _sequences(cfg, runner, quotient_needed=False)
    seq = CountSequence(cfg.p, cfg.a, [v for v, _ in xs])
    Z = zeta.fit_curve(seq, 1)
    Np = zeta.newton_polygon(Z.numerator, cfg.p, cfg.a)
    # full H^1 of a genus-one curve: h^{1,0} = h^{0,1} = 1
    Hp = hodge.curve_hodge_polygon(1)
    res = hodge.newton_above_hodge(Np, Hp)
    rep.update(counts=[{"k": k, "N_k": str(v), "provenance": p} for k, (v, p) in enumerate(xs, 1)],
               ratio=Z.to_dict(), newton=Np.to_dict(), hodge_polygon=Hp.to_dict(), comparison=res,
               shape=classify_slopes(Np.slopes))
    statuses = [res["verdict"], "fail" if Z.status == "inconsistent" else "pass"]
    rep["table"] = rep["counts"]
    rep["verdicts"] = {"newton_above_hodge": res["verdict"], "overall": report.overall(statuses)}
    return rep


def smoothness_table(cfg, search_degree=None, oracle=True, method="roots"):
    """Closed form against the Jacobian search for every lambda in F_q."""
    if cfg.family != "dwork":
        raise ValidationError("smoothness sweeps the Dwork family")
    e = search_degree or cfg.n + 1
    t = ex.tower_for(cfg.p, cfg.a, tuple(range(1, e + 1)))
    rows = []
    for vec in ex.all_scalars(cfg.p, cfg.a):
        lam = ex.embed(t, vec)
        smooth = varieties.is_smooth_dwork(cfg.n, lam, t)
        row = {"lambda": ",".join(map(str, vec)), "closed_form": "smooth" if smooth else "singular"}
        if oracle:
            X = varieties.dwork(cfg.n, lam, t)
            wit = varieties.jacobian_singular_oracle(X, e, method=method, workers=cfg.workers,
                                                     budget=cfg.budget)
            row["oracle"] = "singular" if wit else "smooth"
            row["singular_points"] = len(wit)
            row["agree"] = row["oracle"] == row["closed_form"]
        rows.append(row)
    return rows


def cmd_smoothness(args, cfg, runner):
    rows = smoothness_table(cfg, args.search_degree, not args.no_oracle)
    rep = _base("smoothness", cfg)
    rep.update(search_degree=args.search_degree or cfg.n + 1, table=rows, lambdas=rows,
               singular_lambdas=[r["lambda"] for r in rows if r["closed_form"] == "singular"])
    statuses = ["pass" if r.get("agree", True) else "fail" for r in rows]
    rep["verdicts"] = {"overall": report.overall(statuses)}
    return rep


def cmd_hodge_numbers(args):
    H = hodge.hodge_numbers_hypersurface(args.n, args.d)
    S = hodge.hodge_numbers_staircase(args.n, args.d)
    prim = H.primitive
    checks = {"staircase_oracle": prim == S.primitive, "symmetric": prim == prim[::-1],
              "nonnegative": all(h >= 0 for h in prim)}
    if args.d == args.n + 1:
        checks["calabi_yau_h0"] = prim[-1] == 1
    rep = {"command": "hodge-numbers", "engine": ex.ENGINE_VERSION, "config": {"n": args.n, "d": args.d},
           "hodge": H.to_dict(), "hodge_polygon": hodge.hodge_polygon(H).to_dict(), "checks": checks,
           "table": [{"p": p, "q": H.weight - p, "h_prim": str(h)} for p, h in enumerate(prim)],
           "verdicts": {"overall": "pass" if all(checks.values()) else "fail"}}
    return rep


COMMANDS = {
    "count": cmd_count,
    "twisted-count": cmd_twisted,
    "quotient-count": cmd_quotient,
    "verify-congruence": cmd_verify_congruence,
    "verify-unit": cmd_verify_unit,
    "zeta-fit": cmd_zeta_fit,
    "newton-hodge": cmd_newton_hodge,
    "smoothness": cmd_smoothness,
}


def run(argv):
    """Parse, execute, and return (exit code, report text)."""
    args = build_parser().parse_args(argv)
    try:
        if args.command == "hodge-numbers":
            rep = cmd_hodge_numbers(args)
        else:
            cfg = config_from_args(args)
            cache = _cache_for(args, cfg)
            if cache is not None and args.verify_cache:
                checked, bad = cache.verify(recompute_entry)
                if bad:
                    print(f"cache verification failed on {len(bad)} of {checked} entries", file=sys.stderr)
                    return 1, ""
            rep = COMMANDS[args.command](args, cfg, Runner(cfg, cache))
    except BudgetError as exc:
        print(f"budget exceeded: {exc} (size {exc.size}, budget {exc.budget})", file=sys.stderr)
        return 2, ""
    except (MirrorCountError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2, ""
    status = rep["verdicts"]["overall"]
    if args.format == "json":
        rep.pop("table", None)
    text = report.emit(rep, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    return report.EXIT_CODES[status], text


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    code, text = run(argv)
    if text and "--output" not in argv:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
