"""Command line front end: ``kz <command> --problem FILE [options]``."""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import prod
from typing import Callable

from . import koszul as kz_koszul
from . import localcoh as lc
from . import sequences as sq
from .errors import (KzError, ParseError, PreconditionError, ResourceBudgetExceeded,
                     VerificationFailure)
from .groebner import is_infinite
from .modules import chi1_via_multiplicity, h0_length, is_cohen_macaulay
from .parallel import default_jobs
from .problem import Problem, parse_problem

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_RESOURCE = 4
EXIT_VERIFY = 5

COMMANDS = ("chi", "chi-table", "homology", "seq-check", "fit", "pk", "h0", "lc",
            "filtration", "seqcm", "distinguished", "verify")
VERIFY_TARGETS = ("lemma21", "cmm", "gc", "thm12", "thm14", "thm15", "thm11", "inversion", "multiplicity")


def _key(n) -> str:
    return ",".join(str(a) for a in n)


def _enc(v):
    if is_infinite(v):
        return "infinite"
    return v


def _parse_n(text: str | None, d: int) -> tuple:
    if text is None:
        return (1,) * d
    try:
        n = tuple(int(a) for a in text.split(","))
    except ValueError:
        raise ParseError(f"--n expects comma separated integers, got {text!r}") from None
    if len(n) != d or any(a < 1 for a in n):
        raise PreconditionError(f"--n needs {d} positive exponents")
    return n


class Context:
    def __init__(self, problem: Problem, args):
        self.problem = problem
        self.args = args
        self.M = problem.module()
        self.jobs = args.jobs if args.jobs else default_jobs()

    @property
    def x(self):
        return self.problem.require_sequence()

    @property
    def d(self) -> int:
        return len(self.x)

    @property
    def n_max(self) -> int:
        return self.args.nmax if self.args.nmax is not None else self.problem.n_max

    def ks(self) -> list[int]:
        return [self.args.k] if self.args.k is not None else list(range(1, self.d + 1))

    def grid(self, default: int = 2) -> list[tuple]:
        g = self.args.grid if self.args.grid is not None else default
        return sq.exponent_grid(self.d, 1, g)

    def filtration(self):
        return lc.dimension_filtration(self.M, self.problem.filtration_chain())


# ---------------------------------------------------------------------------
# commands


def cmd_chi(ctx: Context) -> dict:
    n = _parse_n(ctx.args.n, ctx.d)
    k = ctx.args.k if ctx.args.k is not None else 1
    summary = kz_koszul.koszul_summary(ctx.M, ctx.x, n)
    return {"n": list(n), "k": k, "chi": kz_koszul.chi_k(ctx.M, ctx.x, n, k),
            "homology_lengths": [_enc(v) for v in summary.lengths]}


def cmd_chi_table(ctx: Context) -> dict:
    k = ctx.args.k if ctx.args.k is not None else 1
    pts = ctx.grid(3)
    values = sq.chi_samples(ctx.M, ctx.x, k, pts, ctx.jobs)
    return {"k": k, "grid": max(max(p) for p in pts), "table": {_key(n): v for n, v in sorted(values.items())}}


def cmd_homology(ctx: Context) -> dict:
    n = _parse_n(ctx.args.n, ctx.d)
    kernel_route = [_enc(kz_koszul.homology_length(ctx.M, ctx.x, n, i)) for i in range(ctx.d + 1)]
    summary = kz_koszul.koszul_summary(ctx.M, ctx.x, n)
    image_route = [_enc(v) for v in summary.lengths]
    if kernel_route != image_route:
        raise VerificationFailure(f"homology lengths disagree: {kernel_route} vs {image_route}")
    return {"n": list(n), "lengths": kernel_route, "chi": [v for v in summary.chi]}


def cmd_seq_check(ctx: Context) -> dict:
    level = ctx.args.level
    out: dict = {"n_max": ctx.n_max}
    if level in ("d", "all"):
        ok, wit = sq.is_d_sequence(ctx.M, ctx.x)
        out["d_sequence"] = {"holds": ok, "witness": wit.describe() if wit else None}
    if level in ("strong-d", "all"):
        v = sq.is_strong_d(ctx.M, ctx.x, ctx.n_max)
        out["strong_d"] = {"holds": v.at_least("strong-d"), **v.to_dict()}
    if level in ("dd", "all"):
        v = sq.is_dd_sequence(ctx.M, ctx.x, ctx.n_max)
        out["dd"] = {"holds": v.is_dd, **v.to_dict()}
    return out


def cmd_fit(ctx: Context) -> dict:
    k = ctx.args.k if ctx.args.k is not None else 1
    pts = sq.exponent_grid(ctx.d, 1, ctx.n_max + 1)
    samples = sq.chi_samples(ctx.M, ctx.x, k, pts, ctx.jobs)
    fit = sq.fit_multilinear(samples, ctx.d)
    return {"k": k, "grid": f"{{1..{ctx.n_max + 1}}}^{ctx.d}", **fit.to_dict()}


def cmd_pk(ctx: Context) -> dict:
    out = {}
    for k in ctx.ks():
        out[str(k)] = sq.estimate_pk(ctx.M, ctx.x, k, ctx.n_max, ctx.jobs).to_dict()
    return {"n_max": ctx.n_max, "estimates": out}


def cmd_h0(ctx: Context) -> dict:
    if ctx.args.n is not None:
        n = tuple(int(a) for a in ctx.args.n.split(","))
        Q = ctx.M.quotient_by_elements([f ** a for f, a in zip(ctx.x, n)])
        return {"n": list(n), "h0_length": h0_length(Q)}
    out = {"h0_length": h0_length(ctx.M)}
    if ctx.problem.sequence:
        out["prefix_quotients"] = {str(i): h0_length(ctx.M.quotient_by_elements(ctx.x[:i]))
                                   for i in range(ctx.d)}
    return out


def cmd_lc(ctx: Context) -> dict:
    if ctx.args.k is not None:
        i = ctx.args.i if ctx.args.i is not None else 0
        return lc.quotient_h0_fit_check(ctx.M, ctx.x, ctx.args.k, i, ctx.n_max, ctx.jobs)
    idx = [ctx.args.i] if ctx.args.i is not None else list(range(ctx.d))
    return {"standard_bound": ctx.n_max,
            "lengths": {str(i): lc.lc_length_from_chi(ctx.M, ctx.x, i, True, ctx.n_max) for i in idx}}


def cmd_filtration(ctx: Context) -> dict:
    return ctx.filtration().to_dict()


def cmd_seqcm(ctx: Context) -> dict:
    return lc.is_sequentially_cm(ctx.M, ctx.filtration()).to_dict()


def cmd_distinguished(ctx: Context) -> dict:
    filt = ctx.filtration()
    if not ctx.problem.sequence:
        x = lc.distinguished_sop(ctx.M, filt)
        return {"constructed": [str(f) for f in x], "checks": lc.is_distinguished(ctx.M, x, filt)}
    out = {"sequence": [str(f) for f in ctx.x], "checks": lc.is_distinguished(ctx.M, ctx.x, filt)}
    seq_cm = lc.is_sequentially_cm(ctx.M, filt).overall
    out["sequentially_cm"] = seq_cm
    if seq_cm:
        out["equivalent_conditions"] = lc.distinguished_verdicts(ctx.M, ctx.x, filt, min(ctx.n_max, 2))
    else:
        out["equivalent_conditions"] = "not applicable: the equivalence needs a sequentially Cohen-Macaulay module"
    return out


# ---------------------------------------------------------------------------
# verification harnesses


def _check(name: str, point, lhs, rhs) -> dict:
    return {"identity": name, "point": point, "lhs": _enc(lhs), "rhs": _enc(rhs), "pass": lhs == rhs}


def _require_dd(ctx: Context):
    v = sq.is_dd_sequence(ctx.M, ctx.x, ctx.n_max, certify=False)
    if not v.is_dd:
        raise PreconditionError(f"sequence is {v.level}, not dd at n_max={ctx.n_max}")


def verify_lemma21(ctx: Context) -> list:
    out = []
    for k in ctx.ks():
        for n in ctx.grid():
            out.append(_check(f"chi_{k} = colon multiplicity sum", _key(n),
                              kz_koszul.chi_k(ctx.M, ctx.x, n, k), kz_koszul.chi_via_colons(ctx.M, ctx.x, n, k)))
    return out


def verify_multiplicity(ctx: Context) -> list:
    M, x = ctx.M, ctx.x
    e1 = kz_koszul.multiplicity(x, M)
    out = [_check("e via Hilbert series = chi_0", "1", e1, kz_koszul.multiplicity_via_koszul(x, M))]
    for n in ctx.grid():
        xn = [f ** a for f, a in zip(x, n)]
        out.append(_check("chi_1 = l(M/xM) - e", _key(n), kz_koszul.chi_k(M, x, n, 1), chi1_via_multiplicity(M, xn)))
        out.append(_check("e(x(n)) = n_1..n_d e(x)", _key(n), kz_koszul.multiplicity(xn, M), prod(n) * e1))
    out.append(_check("Cohen-Macaulay iff chi_1 = 0", "1", is_cohen_macaulay(M, x),
                      kz_koszul.chi_k(M, x, None, 1) == 0))
    return out


def verify_gc(ctx: Context) -> list:
    base = list(ctx.x)
    if not lc.is_standard_sop(ctx.M, base, ctx.n_max, ctx.jobs):
        raise PreconditionError("the problem sequence is not a standard system of parameters")
    alternates = [[ctx.M.ring(f) for f in s] for s in ctx.problem.expected.get("alternate_sequences", [])]
    derived = [[f ** 2 for f in base], list(reversed(base))]
    out = []
    for s in alternates + derived:
        out.append(_check("standard", ",".join(map(str, s)), lc.is_standard_sop(ctx.M, s, ctx.n_max, ctx.jobs), True))
    for i in range(ctx.d):
        ref = lc.lc_length_from_chi(ctx.M, base, i, check=False)
        for s in alternates + derived:
            out.append(_check(f"l(H^{i}_m) independent of the standard sequence", ",".join(map(str, s)),
                              lc.lc_length_from_chi(ctx.M, s, i, check=False), ref))
    return out


def verify_thm12(ctx: Context) -> list:
    _require_dd(ctx)
    cert = sq.certify_dd_by_fit(ctx.M, ctx.x, ctx.n_max, ctx.jobs)
    out = [_check("fitted chi_1 matches prefix multiplicities", "grid", cert is not None, True)]
    a = sq.chi1_coefficients(ctx.M, ctx.x)
    for n in sq.exponent_grid(ctx.d, 1, ctx.n_max + 1):
        out.append(_check("chi_1 = sum n_1..n_i a_i", _key(n), kz_koszul.chi_k(ctx.M, ctx.x, n, 1),
                          sum(prod(n[:i]) * ai for i, ai in enumerate(a))))
    return out


def verify_thm14(ctx: Context) -> list:
    _require_dd(ctx)
    out = []
    for k in ctx.ks():
        a = sq.chik_coefficients(ctx.M, ctx.x, k)
        for n in sq.exponent_grid(ctx.d, 1, ctx.n_max + 1):
            out.append(_check(f"chi_{k} = sum n_1..n_i a_i", _key(n), kz_koszul.chi_k(ctx.M, ctx.x, n, k),
                              sum(prod(n[:i]) * ai for i, ai in enumerate(a))))
    return out


def verify_thm15(ctx: Context) -> list:
    filt = ctx.filtration()
    report = lc.is_sequentially_cm(ctx.M, filt)
    if not report.overall:
        raise PreconditionError("module is not sequentially Cohen-Macaulay")
    four = lc.distinguished_verdicts(ctx.M, ctx.x, filt, min(ctx.n_max, 2))
    out = [_check("four equivalent conditions agree", "grid",
                  [four["i_intersection"], four["ii_annihilation"], four["iii_chi1_formula"], four["iv_dd"]],
                  [four["i_intersection"]] * 4)]
    if not four["ii_annihilation"]:
        return out
    out.append(_check("k=1 coefficients all one", "dims", lc.layer_coefficients(filt.dims, 1), [1] * filt.t))
    for k in ctx.ks():
        for n in ctx.grid():
            out.append(_check(f"chi_{k} = layer formula", _key(n), kz_koszul.chi_k(ctx.M, ctx.x, n, k),
                              lc.layered_chi(ctx.M, ctx.x, n, k, filt)))
    return out


def verify_thm11(ctx: Context) -> list:
    out = []
    for k in ctx.ks():
        res = sq.polynomial_type_check(ctx.M, ctx.x, k, ctx.n_max, ctx.jobs)
        out.append(_check(f"chi_{k} polynomial beyond n0={res['n0']}", res["fit"]["polynomial"]["rendered"],
                          res["polynomial_beyond_n0"], True))
    return out


def verify_cmm(ctx: Context) -> list:
    """Koszul homology lengths of prefixes from H^0 lengths (strong d-sequences)."""
    if not sq.is_strong_d(ctx.M, ctx.x, ctx.n_max).at_least("strong-d"):
        raise PreconditionError("sequence is not a strong d-sequence")
    out = []
    for j in range(1, ctx.d + 1):
        for n in sq.exponent_grid(j, 1, 2):
            for i in range(1, j + 1):
                out.append(_check(f"l(H_{i}) of the first {j}", _key(n),
                                  kz_koszul.homology_length(ctx.M, ctx.x[:j], n, i),
                                  kz_koszul.homology_length_from_h0(ctx.M, ctx.x[:j], n, i, j)))
    return out


def verify_inversion(ctx: Context) -> list:
    _require_dd(ctx)
    out = []
    for n in ctx.grid():
        xn = [f ** a for f, a in zip(ctx.x, n)]
        lengths = kz_koszul.koszul_summary(ctx.M, xn).lengths
        for i in range(ctx.d):
            h0 = h0_length(ctx.M.quotient_by_elements(xn[:i]))
            out.append(_check(f"H^0 length from homology, i={i}", _key(n),
                              kz_koszul.h0_from_homology(ctx.M, xn, None, i), h0))
            out.append(_check(f"homology length from H^0, i={i}", _key(n),
                              kz_koszul.homology_from_h0(ctx.M, xn, None, i), lengths[ctx.d - i]))
    return out


VERIFIERS: dict[str, Callable[[Context], list]] = {
    "lemma21": verify_lemma21, "cmm": verify_cmm, "gc": verify_gc, "thm12": verify_thm12,
    "thm14": verify_thm14, "thm15": verify_thm15, "thm11": verify_thm11,
    "inversion": verify_inversion, "multiplicity": verify_multiplicity,
}


def cmd_verify(ctx: Context) -> dict:
    target = ctx.args.target
    if target is None:
        raise ParseError(f"verify needs a target: {', '.join(VERIFY_TARGETS)}")
    checks = VERIFIERS[target](ctx)
    failed = [c for c in checks if not c["pass"]]
    return {"target": target, "checks": checks, "passed": not failed, "failures": len(failed)}


HANDLERS = {
    "chi": cmd_chi, "chi-table": cmd_chi_table, "homology": cmd_homology, "seq-check": cmd_seq_check,
    "fit": cmd_fit, "pk": cmd_pk, "h0": cmd_h0, "lc": cmd_lc, "filtration": cmd_filtration,
    "seqcm": cmd_seqcm, "distinguished": cmd_distinguished, "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# reports


def run_command(command: str, problem: Problem, args) -> dict:
    start = time.perf_counter()
    ctx = Context(problem, args)
    results = HANDLERS[command](ctx)
    flags = {k: v for k, v in sorted(vars(args).items())
             if k not in ("command", "problem", "out", "jobs") and v is not None}
    return {
        "schema": REPORT_SCHEMA,
        "command": command,
        "flags": flags,
        "problem": problem.name,
        "input_digest": problem.digest(),
        "results": results,
        "timing_seconds": round(time.perf_counter() - start, 3),
    }


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False, default=str)


def _grid_table(table: dict) -> list[str] | None:
    keys = [tuple(int(a) for a in k.split(",")) for k in table]
    if not keys or len(keys[0]) != 2:
        return None
    rows = sorted({k[0] for k in keys})
    cols = sorted({k[1] for k in keys})
    width = max(len(str(v)) for v in table.values()) + 1
    lines = ["n1\\n2 " + "".join(f"{c:>{width}}" for c in cols)]
    for r in rows:
        lines.append(f"{r:>5} " + "".join(f"{str(table.get(_key((r, c)), '')):>{width}}" for c in cols))
    return lines


def _flatten(prefix: str, value, lines: list):
    if isinstance(value, dict):
        if value and all("," in k or k.isdigit() for k in value) and prefix.endswith(("table", "values")):
            grid = _grid_table(value)
            if grid:
                lines.append(f"{prefix}:")
                lines.extend("  " + g for g in grid)
                return
        for k in sorted(value):
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], lines)
    elif isinstance(value, list) and value and all(isinstance(v, dict) and "identity" in v for v in value):
        for c in value:
            mark = "PASS" if c["pass"] else "FAIL"
            lines.append(f"{mark}  {c['identity']} @ {c['point']}: {c['lhs']} vs {c['rhs']}")
    else:
        lines.append(f"{prefix}: {value}")


def to_table(report: dict) -> str:
    lines = [f"kz {report['command']} on {report['problem']} ({report['input_digest']})"]
    _flatten("", report["results"], lines)
    lines.append(f"time: {report['timing_seconds']} s")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kz", description="Koszul homology, Euler characteristics and sequence verdicts.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", nargs="?", choices=VERIFY_TARGETS, help="verification target for 'verify'")
    p.add_argument("--problem", required=True, help="JSON problem file")
    p.add_argument("--k", type=int)
    p.add_argument("--i", type=int, help="local cohomology index for 'lc'")
    p.add_argument("--n", help="exponents, comma separated")
    p.add_argument("--grid", type=int, help="grid {1..G}^d for tables and identities")
    p.add_argument("--nmax", type=int, help="bound for joint quantifiers")
    p.add_argument("--level", choices=("d", "strong-d", "dd", "all"), default="all")
    p.add_argument("--jobs", type=int, help="worker processes (default: logical cores)")
    p.add_argument("--out", choices=("json", "table"), default="json")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        problem = parse_problem(args.problem)
        report = run_command(args.command, problem, args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read problem file: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResourceBudgetExceeded as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except KzError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    print(to_json(report) if args.out == "json" else to_table(report))
    if args.command == "verify" and not report["results"]["passed"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
