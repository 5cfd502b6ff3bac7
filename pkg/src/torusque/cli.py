"""Batch front-end: prime sweeps, report emission, plot data.

Verbs:
    validate   check a matrix for ergodicity, print the verdict
    quantize   quantize a trigonometric polynomial, print operator facts
    sweep      run the enabled checks over a prime range, emit JSON + CSV
    demo       cyclic vs torus averaging table for one prime
    plotdata   reduce sweep JSON reports to a plotting CSV

Configuration is plain key=value lines (see SweepConfig.FIELDS) with
command-line flags overriding file values.  Exit codes: 0 all checks passed,
1 at least one assertion failed (witnesses in the JSON), 2 configuration
error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import ffcore, hecke, quevaluator, weil
from .classical import (CAT_MAP, SP4_FIXTURE, ErgodicElement, ValidationError,
                        validate_ergodic)
from .ffcore import PrimeModulus
from .heisenberg import FourierPolynomial, check_relations, integral, quantize

ALL_CHECKS = ("relations", "egorov", "multiplicativity", "decomposition",
              "bound", "refined", "trace-formula", "factorization", "demo")


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    n: int = 1
    matrix: str = "2,1;1,1"
    pmin: int = 3
    pmax: int = 13
    checks: tuple = ALL_CHECKS
    seed: int = 0
    deterministic: bool = False
    out_json: str | None = None
    out_csv: str | None = None
    budget_seconds: float = 600.0

    FIELDS = ("n", "matrix", "pmin", "pmax", "checks", "seed", "deterministic",
              "out_json", "out_csv", "budget_seconds")


def parse_matrix(text: str, n: int):
    """'a,b;c,d' rows, or the named fixtures 'cat-map' / 'auto-sp4'."""
    if text == "cat-map":
        return CAT_MAP
    if text == "auto-sp4":
        return SP4_FIXTURE
    try:
        rows = tuple(tuple(int(x) for x in row.split(","))
                     for row in text.strip().split(";"))
    except ValueError as e:
        raise ConfigError(f"cannot parse matrix {text!r}: {e}")
    if len(rows) != 2 * n or any(len(r) != 2 * n for r in rows):
        raise ConfigError(f"matrix must be {2*n}x{2*n} for n = {n}")
    return rows


def load_config_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, val = line.split("=", 1)
            out[key.strip()] = val.strip()
    return out


def build_config(file_vals: dict, overrides: dict) -> SweepConfig:
    merged = dict(file_vals)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    cfg = SweepConfig()
    for key, val in merged.items():
        if key not in SweepConfig.FIELDS:
            raise ConfigError(f"unknown config key {key!r}")
        if key in ("n", "pmin", "pmax", "seed"):
            setattr(cfg, key, int(val))
        elif key == "budget_seconds":
            setattr(cfg, key, float(val))
        elif key == "deterministic":
            setattr(cfg, key, val if isinstance(val, bool) else
                    str(val).lower() in ("1", "true", "yes"))
        elif key == "checks":
            names = tuple(s.strip() for s in str(val).split(",") if s.strip()) \
                if val != "all" else ALL_CHECKS
            for name in names:
                if name not in ALL_CHECKS:
                    raise ConfigError(f"unknown check {name!r}")
            setattr(cfg, key, names)
        else:
            setattr(cfg, key, val)
    if cfg.n not in (1, 2):
        raise ConfigError("n must be 1 or 2")
    if cfg.pmin < 3 or cfg.pmax < cfg.pmin:
        raise ConfigError("need 3 <= pmin <= pmax")
    return cfg


# ---------------------------------------------------------------------------
# per-prime execution


@dataclass
class CheckResult:
    name: str
    status: str          # "pass" | "fail" | "skip"
    max_dev: float = 0.0
    max_ratio: float = 0.0
    witnesses: list = field(default_factory=list)
    millis: int = 0

    def to_dict(self, deterministic: bool) -> dict:
        return {"name": self.name, "status": self.status,
                "max_dev": self.max_dev, "max_ratio": self.max_ratio,
                "witnesses": self.witnesses[:16],
                "millis": -1 if deterministic else self.millis}


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, int(1000 * (time.perf_counter() - t0))


def run_prime(elem: ErgodicElement, p: int, cfg: SweepConfig) -> dict:
    n = cfg.n
    pm = PrimeModulus(p, n)
    results: list[CheckResult] = []
    start = time.perf_counter()

    def over_budget():
        return time.perf_counter() - start > cfg.budget_seconds

    torus = hecke.centralizer(elem.matrix, pm, elem.charpoly)
    rng = np.random.default_rng(cfg.seed + p)
    if n == 1:
        rep = weil.linearize(pm)
    else:
        rep = weil.linearize_on_torus(torus, pm, rng=rng, root_index=0)

    table = None
    decomposition = None

    def get_table():
        nonlocal table
        if table is None:
            table = quevaluator.build_trace_table(torus, rep)
        return table

    def get_decomposition():
        nonlocal decomposition
        if decomposition is None:
            decomposition = hecke.decompose(torus, rep)
        return decomposition

    for name in cfg.checks:
        if over_budget():
            results.append(CheckResult(name, "skip",
                                       witnesses=[{"reason": "budget exceeded"}]))
            continue
        runner = _CHECK_RUNNERS[name]
        try:
            res, ms = _timed(lambda: runner(elem, pm, torus, rep, rng,
                                            get_table, get_decomposition))
            res.millis = ms
        except Exception as e:  # noqa: BLE001 - report, do not crash the sweep
            res = CheckResult(name, "fail",
                              witnesses=[{"error": f"{type(e).__name__}: {e}"}])
        results.append(res)

    return {"p": p, "n": n, "split_type": torus.split_type,
            "torus_order": torus.order,
            "checks": [r.to_dict(cfg.deterministic) for r in results]}


def _check_relations(elem, pm, torus, rep, rng, get_table, get_dec):
    rpt = check_relations(pm, tol=1e-10)
    return CheckResult("relations", "pass" if rpt.ok else "fail",
                       max_dev=rpt.max_dev,
                       witnesses=[] if rpt.ok else [{"epsilon": rpt.epsilon}])


def _check_egorov(elem, pm, torus, rep, rng, get_table, get_dec):
    xis = _spanning_xis(pm, rng, extra=50)
    tol = 1e-9 * pm.p ** (pm.n / 2)
    worst = 0.0
    witness = []
    for b in torus.elements:
        dev = weil.egorov_deviation(rep.op(b), b, pm, xis)
        if dev > worst:
            worst = dev
            if dev > tol:
                witness = [{"B": b, "dev": dev}]
    if pm.n == 1:
        for _ in range(25):
            b = weil.random_sl2(pm.p, rng)
            dev = weil.egorov_deviation(rep.op(b), b, pm, xis)
            worst = max(worst, dev)
    else:
        gamma = _monoid_gamma(pm)
        for word in _random_monoid_words(pm, rng, 25):
            b = weil.word_matrix(word, pm)
            dense = weil.word_operator(word, pm, gamma)
            dev = weil.egorov_deviation(dense, b, pm, xis)
            worst = max(worst, dev)
    ok = worst <= tol
    return CheckResult("egorov", "pass" if ok else "fail", max_dev=worst,
                       witnesses=witness)


def _check_multiplicativity(elem, pm, torus, rep, rng, get_table, get_dec):
    if pm.n == 1:
        if pm.p <= 5:
            rpt = weil.check_multiplicativity(rep, tol=1e-9)
        else:
            # throwaway rep: the sampled operators would otherwise stay cached
            scratch = weil.linearize(pm)
            rpt = weil.check_multiplicativity(scratch, pairs=500, tol=1e-8,
                                              seed=int(rng.integers(2 ** 31)))
        ok, dev = rpt.ok, rpt.max_dev
    else:
        dev = _torus_multiplicativity(torus, rep, pm)
        dev = max(dev, _monoid_relation_dev(pm, rng))
        ok = dev <= 1e-8
    # torus generator orders: rho(g)^N = identity
    for g, order in torus.generators:
        power = np.linalg.matrix_power(rep.op(g), order)
        dev = max(dev, float(np.abs(power - np.eye(pm.dim)).max()))
    ok = ok and dev <= 1e-8
    return CheckResult("multiplicativity", "pass" if ok else "fail", max_dev=dev)


def _check_decomposition(elem, pm, torus, rep, rng, get_table, get_dec):
    dec = get_dec()
    dims = dec.dims
    chis = hecke.characters(torus)
    ok = sum(dims) == pm.dim
    witnesses = []
    for chi, d in zip(chis, dims):
        if d > 1 and chi.order != 2:
            ok = False
            witnesses.append({"exps": chi.exps, "dim": d})
    exceptional = [(chi.exps, d) for chi, d in zip(chis, dims)
                   if d != 1 and chi.order == 2]
    return CheckResult("decomposition", "pass" if ok else "fail",
                       max_dev=dec.max_eigen_dev,
                       witnesses=witnesses + [{"order2_pattern": exceptional,
                                               "dims_sorted": sorted(dims)}])


def _check_bound(elem, pm, torus, rep, rng, get_table, get_dec):
    fixtures = [_real_character_fixture(pm)]
    rpt = quevaluator.verify_que_bound(elem, pm, rep, decomposition=get_dec(),
                                       torus=torus, table=get_table(),
                                       fixtures=fixtures)
    witnesses = [{"xi": v[0], "chi_exps": v[1], "abs_a": v[2], "bound": v[3]}
                 for v in rpt.violations[:8]]
    witnesses.append({"max_ratio_dim1": rpt.max_ratio_dim1,
                      "exceptional_order2": rpt.exceptional_order2,
                      "parseval_max_dev": rpt.parseval_max_dev})
    return CheckResult("bound", "pass" if rpt.ok else "fail",
                       max_ratio=rpt.max_ratio, witnesses=witnesses)


def _check_refined(elem, pm, torus, rep, rng, get_table, get_dec):
    rpt = quevaluator.refined_bound(elem, pm, torus, get_table())
    if not rpt.applicable:
        return CheckResult("refined", "skip",
                           witnesses=[{"reason": f"{torus.split_type} prime"}])
    bad = [r for r in rpt.rows if not r["ok"]]
    return CheckResult("refined", "pass" if rpt.generic_ok else "fail",
                       max_ratio=max((r["generic_max"] / r["refined_bound"]
                                      for r in rpt.rows), default=0.0),
                       witnesses=bad[:8])


def _check_trace_formula(elem, pm, torus, rep, rng, get_table, get_dec):
    if pm.n != 1:
        return CheckResult("trace-formula", "skip",
                           witnesses=[{"reason": "n = 1 closed form only"}])
    sign = quevaluator.measure_split_sign(pm, rep)
    p = pm.p
    worst = 0.0
    for a in range(2, p):
        b = ((a, 0), (0, pow(a, -1, p)))
        dense = rep.op(b)
        for lam in range(p):
            for mu in range(p):
                ref = quevaluator.trace_pair((lam, mu), dense, pm)
                val = quevaluator.split_trace_formula(lam, mu, a, pm, sign)
                worst = max(worst, abs(val - ref))
    ok = worst <= 1e-10
    return CheckResult("trace-formula", "pass" if ok else "fail", max_dev=worst,
                       witnesses=[{"sign": sign}])


def _check_factorization(elem, pm, torus, rep, rng, get_table, get_dec):
    if pm.n != 2 or torus.split_type != "split":
        return CheckResult("factorization", "skip",
                           witnesses=[{"reason": "needs a fully split n = 2 prime"}])
    rpt = quevaluator.factorization_check(elem, pm, rng)
    return CheckResult("factorization", "pass" if rpt.ok else "fail",
                       max_dev=rpt.max_rel_err,
                       witnesses=[{"generic_pairs": rpt.generic_pairs,
                                   "matched_generic": rpt.matched_generic,
                                   "matched_all": rpt.matched_all_reconciled,
                                   "total": rpt.pairs_total}])


def _check_demo(elem, pm, torus, rep, rng, get_table, get_dec):
    rows, meta = quevaluator.cyclic_vs_hecke_demo(elem, pm, rep)
    ok = all(r.hecke_ok for r in rows)
    return CheckResult("demo", "pass" if ok else "fail",
                       witnesses=[{"cyclic_order": meta["cyclic_order"],
                                   "torus_order": meta["torus_order"],
                                   "coincide": meta["cyclic_equals_torus"]}])


_CHECK_RUNNERS = {
    "relations": _check_relations,
    "egorov": _check_egorov,
    "multiplicativity": _check_multiplicativity,
    "decomposition": _check_decomposition,
    "bound": _check_bound,
    "refined": _check_refined,
    "trace-formula": _check_trace_formula,
    "factorization": _check_factorization,
    "demo": _check_demo,
}


def _spanning_xis(pm, rng, extra=50):
    d2 = 2 * pm.n
    xis = [tuple(1 if i == j else 0 for i in range(d2)) for j in range(d2)]
    for _ in range(extra):
        xis.append(tuple(int(x) for x in rng.integers(0, pm.p, size=d2)))
    return xis


def _random_monoid_words(pm, rng, count):
    words = []
    for _ in range(count):
        word = []
        for _ in range(int(rng.integers(1, 4))):
            kind = rng.integers(0, 3)
            if kind == 0:
                s = _random_symmetric(pm, rng)
                word.append(weil.SpFactor("shear", s))
            elif kind == 1:
                m = _random_invertible(pm, rng)
                word.append(weil.SpFactor("dilate", m))
            else:
                word.append(weil.SpFactor("fourier"))
        words.append(word)
    return words


def _monoid_gamma(pm):
    return weil.solve_gamma(pm)


def _random_symmetric(pm, rng):
    n, p = pm.n, pm.p
    s = rng.integers(0, p, size=(n, n))
    s = (s + s.T) % p
    return tuple(tuple(int(x) for x in row) for row in s)


def _random_invertible(pm, rng):
    n, p = pm.n, pm.p
    while True:
        m = tuple(tuple(int(x) for x in rng.integers(0, p, size=n)) for _ in range(n))
        if ffcore.mat_det(m) % p != 0:
            return m


def _torus_multiplicativity(torus, rep, pm):
    ops = [rep.op(b) for b in torus.elements]
    idx = {b: i for i, b in enumerate(torus.elements)}
    worst = 0.0
    for i, b1 in enumerate(torus.elements):
        for j, b2 in enumerate(torus.elements):
            k = idx[ffcore.mat_mul(b1, b2, mod=pm.p)]
            worst = max(worst, float(np.abs(ops[i] @ ops[j] - ops[k]).max()))
    return worst


def _monoid_relation_dev(pm, rng):
    """Defining relations of the generator assignment, as operator identities."""
    gamma = weil.solve_gamma(pm)
    f_op = weil.fourier_op(pm, gamma)
    dev = 0.0
    ident = np.eye(pm.dim)
    # fourier^4 = identity and (fourier shear(I))^3 = identity
    dev = max(dev, float(np.abs(np.linalg.matrix_power(f_op, 4) - ident).max()))
    k = f_op @ weil.shear_op(ffcore.identity_mat(pm.n), pm).dense()
    dev = max(dev, float(np.abs(np.linalg.matrix_power(k, 3) - ident).max()))
    for _ in range(10):
        s1, s2 = _random_symmetric(pm, rng), _random_symmetric(pm, rng)
        m1, m2 = _random_invertible(pm, rng), _random_invertible(pm, rng)
        lhs = weil.shear_op(s1, pm).dense() @ weil.shear_op(s2, pm).dense()
        rhs = weil.shear_op(ffcore.mat_mod(ffcore.mat(
            [[(s1[i][j] + s2[i][j]) for j in range(pm.n)] for i in range(pm.n)]),
            pm.p), pm).dense()
        dev = max(dev, float(np.abs(lhs - rhs).max()))
        lhs = weil.dilate_op(m1, pm).dense() @ weil.dilate_op(m2, pm).dense()
        rhs = weil.dilate_op(ffcore.mat_mul(m1, m2, mod=pm.p), pm).dense()
        dev = max(dev, float(np.abs(lhs - rhs).max()))
        # dilate conjugates shear: t(M) u(S) t(M)^-1 = u(M^-T S M^-1)
        minv = ffcore.mat_inv_modp(m1, pm.p)
        s_conj = ffcore.mat_mul(ffcore.mat_mul(ffcore.mat_transpose(minv), s1,
                                               mod=pm.p), minv, mod=pm.p)
        lhs = weil.dilate_op(m1, pm).dense() @ weil.shear_op(s1, pm).dense() \
            @ weil.dilate_op(minv, pm).dense()
        rhs = weil.shear_op(s_conj, pm).dense()
        dev = max(dev, float(np.abs(lhs - rhs).max()))
    return dev


def _real_character_fixture(pm):
    xi = (1,) + (0,) * (2 * pm.n - 1)
    neg = tuple((-c) % pm.p for c in xi)
    return FourierPolynomial({xi: 0.5, neg: 0.5})


# ---------------------------------------------------------------------------
# sweep driver and report emission


def run(cfg: SweepConfig) -> int:
    try:
        matrix = parse_matrix(cfg.matrix, cfg.n)
        elem = validate_ergodic(matrix)
    except (ConfigError, ValidationError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    primes = ffcore.odd_primes(cfg.pmin, cfg.pmax)
    prime_reports = []
    skipped = []
    for p in primes:
        cp_mod = ffcore.poly_mod_reduce(elem.charpoly, p)
        if hecke.is_degenerate_prime(cp_mod, p):
            skipped.append({"p": p, "reason": "degenerate prime"})
            continue
        prime_reports.append(run_prime(elem, p, cfg))

    status_fail = any(c["status"] == "fail"
                      for rp in prime_reports for c in rp["checks"])
    report = {
        "meta": {
            "n": cfg.n, "matrix": list(map(list, elem.matrix)),
            "charpoly": list(elem.charpoly),
            "pmin": cfg.pmin, "pmax": cfg.pmax,
            "checks": list(cfg.checks), "seed": cfg.seed,
            "deterministic": cfg.deterministic,
            "conventions": _measured_conventions(cfg.n,
                                                 [rp["p"] for rp in prime_reports]),
        },
        "primes": prime_reports,
        "skipped": skipped,
        "all_passed": not status_fail,
    }
    if cfg.out_json:
        with open(cfg.out_json, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True, default=_json_default)
            fh.write("\n")
    if cfg.out_csv:
        write_csv_summary(report, cfg.out_csv)
    for rp in prime_reports:
        for c in rp["checks"]:
            print(f"p={rp['p']:3d} {c['name']:<16} {c['status']:<5} "
                  f"max_dev={c['max_dev']:.3e} max_ratio={c['max_ratio']:.4f}")
            if c["status"] == "fail":
                for w in c["witnesses"][:4]:
                    print(f"      witness: {w}")
    for sk in skipped:
        print(f"p={sk['p']:3d} skipped: {sk['reason']}")
    return 1 if status_fail else 0


def _measured_conventions(n: int, primes: list) -> dict:
    """Orientation signs, measured once and frozen into the report header."""
    if not primes:
        return {}
    pm = PrimeModulus(primes[0], n)
    out = {"relation_sign": check_relations(pm).epsilon}
    if n == 1:
        rep = weil.linearize(pm)
        out["trace_formula_sign"] = quevaluator.measure_split_sign(pm, rep)
        out["fourier_normalization"] = {"re": rep.gamma.real, "im": rep.gamma.imag}
    return out


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_csv_summary(report: dict, path: str):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["p", "check", "status", "max_dev", "max_ratio", "millis"])
        for rp in report["primes"]:
            for c in rp["checks"]:
                w.writerow([rp["p"], c["name"], c["status"],
                            f"{c['max_dev']:.12e}", f"{c['max_ratio']:.12f}",
                            c["millis"]])


def emit_plotdata(report_paths: list[str], out_path: str):
    """CSV of (p, max |a_chi|/p^{n/2}, 2^n) rows across sweep reports."""
    rows = []
    for path in report_paths:
        with open(path) as fh:
            rpt = json.load(fh)
        n = rpt["meta"]["n"]
        for prp in rpt["primes"]:
            bound_checks = [c for c in prp["checks"] if c["name"] == "bound"]
            for c in bound_checks:
                rows.append((prp["p"], c["max_ratio"], 2 ** n))
    rows.sort()
    with open(out_path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["p", "max_ratio", "bound_constant"])
        for r in rows:
            w.writerow(r)
    return len(rows)


# ---------------------------------------------------------------------------
# entry point


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="torusque")
    sub = parser.add_subparsers(dest="verb", required=True)

    pv = sub.add_parser("validate", help="check a matrix for ergodicity")
    pv.add_argument("--n", type=int, default=1)
    pv.add_argument("--matrix", default="2,1;1,1")

    pq = sub.add_parser("quantize", help="quantize a trigonometric polynomial")
    pq.add_argument("--p", type=int, required=True)
    pq.add_argument("--n", type=int, default=1)
    pq.add_argument("--terms", required=True,
                    help="semicolon list 'c1,...,c2n:re[,im]'")

    ps = sub.add_parser("sweep", help="run checks over a prime range")
    ps.add_argument("--config")
    ps.add_argument("--n", type=int)
    ps.add_argument("--matrix")
    ps.add_argument("--pmin", type=int)
    ps.add_argument("--pmax", type=int)
    ps.add_argument("--checks")
    ps.add_argument("--seed", type=int)
    ps.add_argument("--deterministic", action="store_const", const=True)
    ps.add_argument("--out-json", dest="out_json")
    ps.add_argument("--out-csv", dest="out_csv")
    ps.add_argument("--budget-seconds", dest="budget_seconds", type=float)

    pd = sub.add_parser("demo", help="cyclic vs torus averaging table")
    pd.add_argument("--p", type=int, required=True)
    pd.add_argument("--n", type=int, default=1)
    pd.add_argument("--matrix", default="2,1;1,1")

    pp = sub.add_parser("plotdata", help="reduce sweep reports to plot CSV")
    pp.add_argument("--reports", nargs="+", required=True)
    pp.add_argument("--out", required=True)

    args = parser.parse_args(argv)

    if args.verb == "validate":
        try:
            matrix = parse_matrix(args.matrix, args.n)
        except ConfigError as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        from .classical import try_validate
        elem, verdict = try_validate(matrix)
        print(verdict)
        if elem is not None:
            print("charpoly:", ffcore.poly_str(elem.charpoly))
        return 0 if elem is not None else 2

    if args.verb == "quantize":
        return _quantize_verb(args)

    if args.verb == "sweep":
        try:
            file_vals = load_config_file(args.config) if args.config else {}
            overrides = {k: getattr(args, k) for k in SweepConfig.FIELDS}
            cfg = build_config(file_vals, overrides)
        except (ConfigError, OSError) as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        return run(cfg)

    if args.verb == "demo":
        try:
            matrix = parse_matrix(args.matrix, args.n)
            elem = validate_ergodic(matrix)
            pm = PrimeModulus(args.p, args.n)
        except (ConfigError, ValidationError, ValueError) as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        torus = hecke.centralizer(elem.matrix, pm, elem.charpoly)
        if args.n == 1:
            rep = weil.linearize(pm)
        else:
            rep = weil.linearize_on_torus(torus, pm,
                                          rng=np.random.default_rng(0))
        rows, meta = quevaluator.cyclic_vs_hecke_demo(elem, pm, rep)
        print(f"p={args.p} |<A>|={meta['cyclic_order']} |C_A|={meta['torus_order']}"
              f" bound={meta['bound']:.6f}")
        print(f"{'vector':>22} {'|cyclic avg|':>14} {'|torus avg|':>14} {'integral':>9}")
        for r in rows:
            print(f"{r.label:>22} {abs(r.cyclic_avg):>14.6f} "
                  f"{abs(r.hecke_avg):>14.6f} {r.integral:>9.1f}")
        return 0 if all(r.hecke_ok for r in rows) else 1

    if args.verb == "plotdata":
        try:
            count = emit_plotdata(args.reports, args.out)
        except OSError as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        print(f"wrote {count} rows to {args.out}")
        return 0

    return 2


def _quantize_verb(args) -> int:
    try:
        pm = PrimeModulus(args.p, args.n)
        terms = {}
        for part in args.terms.split(";"):
            coeffs, val = part.split(":")
            key = tuple(int(x) for x in coeffs.split(","))
            if len(key) != 2 * args.n:
                raise ValueError(f"term {part!r} has wrong length")
            nums = [float(x) for x in val.split(",")]
            terms[key] = complex(nums[0], nums[1] if len(nums) > 1 else 0.0)
        f = FourierPolynomial(terms)
    except (ValueError, KeyError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    op = quantize(f, pm)
    tr = op.trace() / pm.dim
    a0 = integral(f)
    sa = float(np.abs(op - op.conj().T).max())
    print(f"dim = {pm.dim}")
    print(f"trace/dim = {tr:.12f}  coefficient at 0 = {a0:.12f}  "
          f"|diff| = {abs(tr - a0):.2e}")
    print(f"real-valued symbol: {f.is_real_valued()}  "
          f"self-adjointness deviation: {sa:.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
