"""Command line interface: classify entries, run verification suites, manage the catalog.

Exit codes: 0 pass, 1 verification failure or invariant violation in the input,
2 unreadable or malformed input, 3 internal hard failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from . import catalog
from . import hermitian as herm
from . import quaternionic as quat
from . import structure8 as s8
from .catalog import CatalogEntry, EntryError, InvariantViolation
from .curvature import HardFailure, bianchi_check, holonomy_algebra, levi_civita
from .liealg import classify_algebra
from .scalar import DEFAULT_TOLERANCE, array_is_zero, format_rational, is_exact_scalar, is_zero, parse_rational, tolerance

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_HARD = 0, 1, 2, 3


@dataclass
class RunConfig:
    mode: str = "exact"
    tolerance: float = DEFAULT_TOLERANCE
    output: str = "text"
    jobs: int = 1
    force_structure8: bool = False

    def __post_init__(self) -> None:
        if self.mode not in ("exact", "float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "float" and not self.tolerance > 0:
            raise ValueError("tolerance must be positive in float mode")


@dataclass
class CheckResult:
    id: str
    status: str            # pass | fail | observed | skipped
    residual: Any = 0
    note: str = ""

    def doc(self, exact: bool) -> dict[str, Any]:
        d = {"id": self.id, "status": self.status, "residual": _scalar(self.residual, exact)}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class EntryResult:
    name: str
    flags: dict[str, bool] = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    info: dict[str, Any] = field(default_factory=dict)
    hard_failure: str = ""

    @property
    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if c.status == "fail"]

    def doc(self, exact: bool) -> dict[str, Any]:
        d: dict[str, Any] = {"name": self.name, "flags": dict(sorted(self.flags.items())),
                             "checks": [c.doc(exact) for c in self.checks]}
        if self.info:
            d["info"] = self.info
        if self.hard_failure:
            d["hard_failure"] = self.hard_failure
        return d


def _scalar(x: Any, exact: bool) -> Any:
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if exact:
        return format_rational(x) if is_exact_scalar(x) else str(x)
    return float(x)


def _add(res: EntryResult, cid: str, residual: Any, asserted: bool = True, note: str = "") -> None:
    ok = is_zero(residual)
    status = "pass" if ok else ("fail" if asserted else "observed")
    res.checks.append(CheckResult(cid, status, residual, note))


def _flag(res: EntryResult, cid: str, ok: bool, asserted: bool = True, note: str = "") -> None:
    _add(res, cid, 0 if ok else 1, asserted, note)


# suites ---------------------------------------------------------------------------

def _hermitian_suite(res: EntryResult, h: herm.HermitianStructure, prefix: str) -> None:
    for t in (-1, 0, 1, 3):
        for key, r in herm.connection_axioms(h, t).items():
            _add(res, f"{prefix}connection.t={t}.{key}", r)
    _add(res, f"{prefix}torsion.useful_identity", herm.useful_identity_residual(h))
    try:
        herm.lee_form_check(h)
        _flag(res, f"{prefix}lee.double_computation", True)
    except HardFailure as exc:
        _flag(res, f"{prefix}lee.double_computation", False, note=str(exc))
    rep = herm.classify_hermitian(h)
    _add(res, f"{prefix}rhob2", rep.rhob2_residual, asserted=rep.skt,
         note="" if rep.skt else "not SKT: observed only")
    unimodular = classify_algebra(h.algebra)["unimodular"]
    _flag(res, f"{prefix}lee.gauduchon", rep.gauduchon, asserted=unimodular,
          note="" if unimodular else "not unimodular: observed only")
    first, second = bianchi_check(levi_civita(h.algebra, h.g), h.algebra)
    _flag(res, f"{prefix}bianchi.levi_civita", first and second)
    bfirst, _ = bianchi_check(herm.bismut_connection(h), h.algebra)
    _flag(res, f"{prefix}bianchi.bismut_first", bfirst)


def _hyper_suite(res: EntryResult, q: quat.HyperHermitianStructure, cfg: RunConfig) -> None:
    for n in "IJK":
        _hermitian_suite(res, q.hermitian[n], f"{n}.")
    rep = quat.classify_hyper(q)
    res.flags.update(rep.flags())
    thetas = [herm.lee_form(q.hermitian[n]) for n in "IJK"]
    _flag(res, "lee.common", thetas[0].equals(thetas[1]) and thetas[0].equals(thetas[2]))
    _flag(res, "quaternion.q_real", quat.q_real_check(q))
    if not rep.hkt:
        res.checks.append(CheckResult("hkt.suite", "skipped", 0, "not HKT"))
        return
    conns = [quat.bismut_connection(q)] + [herm.bismut_connection(q.hermitian[n]) for n in "JK"]
    _flag(res, "hkt.common_bismut", conns[0].equals(conns[1]) and conns[0].equals(conns[2]))
    _add(res, "curvature.lc_from_bismut", quat.lc_from_bismut(q))
    obs = [quat.obata_connection(q, roles) for roles in ("IJK", "JKI", "KIJ")]
    _flag(res, "obata.role_independent", obs[0].equals(obs[1]) and obs[0].equals(obs[2]))
    fol = quat.ricci_foliation(q)
    _flag(res, "obata.ricci_pairing", fol.pairing_ok)
    V = quat.euler_vector(q)
    span = [V, q.I @ V, q.J @ V, q.K @ V]
    Theta = quat.obata_ricci(q).Theta.to_array(exact=q.exact)
    _flag(res, "obata.kernel_contains_quaternionic_span", all(array_is_zero(Theta @ v) for v in span))
    hol = rep.holonomy
    _flag(res, "holonomy.bismut_in_sp", hol.contained_in.get("sp", False) or hol.dim == 0)
    res.info["holonomy"] = hol.label
    res.info["H_norm_sq"] = _scalar(herm.classify_hermitian(q.hermitian["I"]).H_norm_sq, q.exact)
    res.info["theta"] = repr(rep.theta)
    if rep.strong_hkt and not rep.hyperkahler:
        parallel_V = array_is_zero(quat.nabla_vector(quat.bismut_connection(q), V))
        if parallel_V:
            h2 = holonomy_algebra(quat.bismut_connection(q), q.algebra, q.g, q.structures, span)
            _flag(res, "holonomy.annihilates_V_span", h2.annihilated == 4)
    _structure8(res, q, cfg)


def _structure8(res: EntryResult, q: quat.HyperHermitianStructure, cfg: RunConfig) -> None:
    try:
        rep = s8.analyze(q, force=cfg.force_structure8, strict=False)
    except s8.Structure8Error as exc:
        res.checks.append(CheckResult("structure8", "skipped", 0, str(exc)))
        return
    for c in rep.checks:
        _add(res, f"structure8.{c.id}", c.residual, asserted=c.asserted)
    res.info["structure8"] = {
        "asserted": rep.asserted, "vertical_type": rep.vertical_type, "a": _scalar(rep.a, q.exact),
        "b": _scalar(rep.b, q.exact), "lambda": _scalar(rep.lam, q.exact),
        "dV_norm_sq": _scalar(rep.dV_norm_sq, q.exact), "metric_scale": _scalar(rep.scale, q.exact),
        "equivalence_flags": list(rep.equivalence_flags),
        "regime": {k: bool(v) for k, v in rep.regime.items()},
    }


def verify_entry(entry: CatalogEntry, cfg: RunConfig | None = None) -> EntryResult:
    cfg = cfg or RunConfig()
    res = EntryResult(entry.name)
    data = entry.data.to_float() if cfg.mode == "float" else entry.data
    try:
        with tolerance(cfg.tolerance):
            if entry.kind == "hyper":
                _hyper_suite(res, data, cfg)
            else:
                _hermitian_suite(res, data, "")
                res.flags.update(herm.classify_hermitian(data).flags())
            for k, v in sorted(entry.expected.items()):
                if k in res.flags:
                    _flag(res, f"expected.{k}", res.flags[k] == v, note=f"expected {v}, computed {res.flags[k]}")
    except HardFailure as exc:
        res.hard_failure = str(exc)
    return res


def _components(form, exact: bool) -> list[Any]:
    """Coefficients of a 1-form on the dual basis."""
    return [_scalar(form[(i,)], exact) for i in range(form.dim)]


def classify_entry(entry: CatalogEntry, cfg: RunConfig | None = None) -> EntryResult:
    cfg = cfg or RunConfig()
    res = EntryResult(entry.name)
    data = entry.data.to_float() if cfg.mode == "float" else entry.data
    try:
        with tolerance(cfg.tolerance):
            if entry.kind == "hyper":
                rep = quat.classify_hyper(data)
                res.flags.update(rep.flags())
                for n in "IJK":
                    hn = herm.classify_hermitian(data.hermitian[n])
                    res.flags.update({f"{n}.{k}": v for k, v in hn.flags().items()})
                hrep = herm.classify_hermitian(data.hermitian["I"])
                res.info["theta"] = _components(rep.theta, data.exact)
                res.info["H_norm_sq"] = _scalar(hrep.H_norm_sq, data.exact)
                if rep.holonomy is not None:
                    res.info["holonomy"] = rep.holonomy.label
                    _structure8(res, data, cfg)
            else:
                hrep = herm.classify_hermitian(data)
                res.flags.update(hrep.flags())
                res.info["theta"] = _components(hrep.theta, data.exact)
                res.info["H_norm_sq"] = _scalar(hrep.H_norm_sq, data.exact)
                hol = holonomy_algebra(herm.bismut_connection(data), data.algebra, data.g, (data.J,))
                res.info["holonomy"] = hol.label
    except HardFailure as exc:
        res.hard_failure = str(exc)
    return res


# entry resolution --------------------------------------------------------------------

def resolve(selector: str) -> CatalogEntry:
    p = Path(selector)
    if p.suffix == ".json" or p.exists():
        return catalog.load_entry(p)
    return catalog.get(selector)


def _verify_job(args: tuple[str, RunConfig]) -> EntryResult:
    sel, cfg = args
    return verify_entry(resolve(sel), cfg)


def _exit_code(results: Sequence[EntryResult]) -> int:
    if any(r.hard_failure for r in results):
        return EXIT_HARD
    if any(r.failed for r in results):
        return EXIT_FAIL
    return EXIT_OK


def _emit(results: Sequence[EntryResult], cfg: RunConfig, out, verbose: bool = True) -> None:
    out = out or sys.stdout
    exact = cfg.mode == "exact"
    if cfg.output == "json":
        doc = {"tool_version": __version__, "entries": [r.doc(exact) for r in results]}
        out.write(json.dumps(doc, indent=1) + "\n")
        return
    for r in results:
        out.write(f"== {r.name}\n")
        for k, v in sorted(r.flags.items()):
            out.write(f"  {k:<28} {v}\n")
        for k, v in r.info.items():
            if isinstance(v, dict):
                out.write(f"  {k}:\n")
                for kk, vv in v.items():
                    out.write(f"    {kk:<26} {vv}\n")
            else:
                out.write(f"  {k:<28} {v}\n")
        for c in r.checks:
            if verbose or c.status != "pass":
                extra = f"  ({c.note})" if c.note else ""
                out.write(f"  [{c.status:<8}] {c.id}  residual={_scalar(c.residual, exact)}{extra}\n")
        if r.hard_failure:
            out.write(f"  HARD FAILURE: {r.hard_failure}\n")
        npass = sum(c.status == "pass" for c in r.checks)
        out.write(f"  summary: {npass} pass, {len(r.failed)} fail, "
                  f"{sum(c.status == 'observed' for c in r.checks)} observed, "
                  f"{sum(c.status == 'skipped' for c in r.checks)} skipped\n")


# commands ----------------------------------------------------------------------------------

def cmd_classify(path: str, cfg: RunConfig, out=None) -> int:
    res = classify_entry(resolve(path), cfg)
    _emit([res], cfg, out)
    return _exit_code([res])


def cmd_verify(selectors: Sequence[str], cfg: RunConfig, out=None, verbose: bool = False) -> int:
    if not selectors:
        raise EntryError("selector", "no entries selected")
    jobs = [(s, cfg) for s in selectors]
    for s in selectors:
        resolve(s)          # surface input errors before any work
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as ex:
            results = list(ex.map(_verify_job, jobs))
    else:
        results = [_verify_job(j) for j in jobs]
    _emit(results, cfg, out, verbose=verbose)
    return _exit_code(results)


def cmd_product(a: str, b: str, dest: str, name: str | None = None) -> CatalogEntry:
    A, B = resolve(a), resolve(b)
    entry = catalog.product(A, B, name or f"{A.name}x{B.name}")
    catalog.validate(entry)
    catalog.save_entry(entry, dest)
    return entry


def cmd_catalog(args: Sequence[str], out=None) -> int:
    out = out or sys.stdout
    if not args or args[0] == "list":
        for e in catalog.build_standard_entries():
            out.write(f"{e.name:<40} {e.kind:<10} dim={e.dim}  {e.provenance}\n")
        return EXIT_OK
    if args[0] == "export" and len(args) == 3:
        catalog.save_entry(catalog.get(args[1]), args[2])
        return EXIT_OK
    raise EntryError("catalog", "usage: catalog [list | export <name> <path>]")


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--tol", default=str(DEFAULT_TOLERANCE), help="float-mode tolerance")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--force-structure8", action="store_true",
                        help="run the dimension-8 analysis in observed mode even outside its gate")
    p = argparse.ArgumentParser(prog="hkt", description="Invariant Hermitian and hyper-Hermitian geometry on Lie algebras")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", parents=[common], help="classify an entry file or catalog name")
    c.add_argument("entry")
    v = sub.add_parser("verify", parents=[common], help="run the verification suite")
    v.add_argument("entries", nargs="*")
    v.add_argument("--all", action="store_true")
    v.add_argument("-v", "--verbose", action="store_true", help="list passing checks too")
    k = sub.add_parser("catalog", parents=[common], help="list or export built-in entries")
    k.add_argument("args", nargs="*")
    r = sub.add_parser("product", parents=[common], help="write the product of two entries")
    r.add_argument("a")
    r.add_argument("b")
    r.add_argument("out")
    r.add_argument("--name")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    try:
        tol = float(parse_rational(ns.tol)) if "/" in ns.tol else float(ns.tol)
    except ValueError:
        raise EntryError("--tol", f"not a number: {ns.tol!r}") from None
    return RunConfig(ns.mode, tol, ns.format, max(1, ns.jobs), ns.force_structure8)


def main(argv: Sequence[str] | None = None) -> int:
    ns = _parser().parse_args(argv)
    try:
        cfg = _config(ns)
        if ns.command == "classify":
            return cmd_classify(ns.entry, cfg)
        if ns.command == "verify":
            sels = catalog.names() if ns.all else list(ns.entries)
            return cmd_verify(sels, cfg, verbose=ns.verbose)
        if ns.command == "catalog":
            return cmd_catalog(ns.args)
        if ns.command == "product":
            e = cmd_product(ns.a, ns.b, ns.out, ns.name)
            sys.stdout.write(f"wrote {e.name} (dim {e.dim}) to {ns.out}\n")
            return EXIT_OK
    except InvariantViolation as exc:
        sys.stderr.write(f"invariant violation: {exc}\n")
        return EXIT_FAIL
    except (EntryError, KeyError, FileNotFoundError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except HardFailure as exc:
        sys.stderr.write(f"internal hard failure: {exc}\n")
        return EXIT_HARD
    return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
