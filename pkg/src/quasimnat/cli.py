"""Command line front end: ``quasimnat check|minimize|verify|gallery``.

JSON goes to standard output (or ``--output``), a short human summary to
standard error. Exit codes: 0 pass, 1 axiom/theorem failure, 2 usage or
input error, 3 strict-mode precondition failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

from . import analysis, axioms, gallery
from .core import EmptyDomainError, FunctionFormatError, IntBox, TabulatedFunction, value_to_json
from .minimize import ALGORITHMS, STRICT_LIMIT, PeelError, minimize
from .validation import NotInDomainError, PreconditionError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2, 3

THEOREMS = ("min-cut-weak", "min-cut-strong", "min-cut-directional", "statement-A",
            "geodesic", "proximity", "local-global", "projection-bridge")

log = logging.getLogger("quasimnat")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input_path: Optional[str] = None
    axiom: Optional[str] = None
    theorem: Optional[str] = None
    algorithm: Optional[str] = None
    start_point: Optional[tuple] = None
    alpha: int = 2
    regime: str = "mnat"
    strict: Optional[bool] = None
    trace: bool = False
    exhaustive: bool = False
    output: str = "-"
    seed: Optional[int] = None
    threads: Optional[int] = None
    name: Optional[str] = None
    k: int = 3
    emit: Optional[str] = None
    audit: bool = False
    box: Optional[IntBox] = None

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        fields = {k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__}
        cfg = cls(**fields)
        cfg.validate()
        return cfg

    def validate(self):
        if self.command == "check" and self.axiom not in axioms.AXIOMS:
            raise UsageError(f"unknown axiom {self.axiom!r}; choose from {', '.join(axioms.AXIOMS)}")
        if self.command == "verify" and self.theorem not in THEOREMS:
            raise UsageError(f"unknown theorem {self.theorem!r}; choose from {', '.join(THEOREMS)}")
        if self.command == "minimize":
            if self.algorithm not in ALGORITHMS:
                raise UsageError(f"unknown algorithm {self.algorithm!r}")
            if self.algorithm != "domain-reduction" and self.start_point is None:
                raise UsageError(f"--start is required for --algo {self.algorithm}")
        if self.alpha < 2:
            raise UsageError("--alpha must be at least 2")


def _point(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _box(text: str) -> IntBox:
    try:
        lo, hi = text.split(":")
        return IntBox(_point(lo), _point(hi))
    except (ValueError, argparse.ArgumentTypeError):
        raise argparse.ArgumentTypeError(f"expected LO:HI with comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasimnat", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_input=True):
        if needs_input:
            sp.add_argument("input_path", metavar="FILE", help="function file (JSON), '-' for stdin")
        sp.add_argument("-o", "--output", default="-", help="where to write JSON (default: stdout)")
        sp.add_argument("--threads", type=int, default=None,
                        help="worker processes for axiom sweeps (default: $QUASIMNAT_THREADS or 1)")

    c = sub.add_parser("check", help="check an exchange axiom")
    c.add_argument("--axiom", required=True, help=", ".join(axioms.AXIOMS))
    c.add_argument("--exhaustive", action="store_true", help="collect every violation")
    common(c)

    m = sub.add_parser("minimize", help="run a minimization algorithm")
    m.add_argument("--algo", dest="algorithm", required=True, choices=ALGORITHMS)
    m.add_argument("--start", dest="start_point", type=_point, default=None, help="start point, e.g. 0,1,2")
    m.add_argument("--box", type=_box, default=None, help="box LO:HI for --algo modified")
    g = m.add_mutually_exclusive_group()
    g.add_argument("--strict", dest="strict", action="store_true", default=None,
                   help=f"verify axiom preconditions (default up to {STRICT_LIMIT} points)")
    g.add_argument("--fast", dest="strict", action="store_false", help="assume preconditions")
    m.add_argument("--trace", action="store_true", help="emit the full step log")
    common(m)

    v = sub.add_parser("verify", help="verify a theorem over all applicable contexts")
    v.add_argument("--theorem", required=True, help=", ".join(THEOREMS))
    v.add_argument("--alpha", type=int, default=2)
    v.add_argument("--regime", choices=("mnat", "m"), default="mnat")
    common(v)

    gl = sub.add_parser("gallery", help="emit or audit the worked examples")
    gl.add_argument("--name", default=None)
    gl.add_argument("--k", type=int, default=3, help="parameter of example-2-4")
    gl.add_argument("--emit", default=None, metavar="PATH", help="write the function file ('-' for stdout)")
    gl.add_argument("--audit", action="store_true", help="replay every expectation")
    gl.add_argument("--list", action="store_true", help="list entry names")
    gl.add_argument("--seed", type=int, default=None)
    common(gl, needs_input=False)
    return p


# -- helpers ---------------------------------------------------------------------------

def _load(path: str) -> TabulatedFunction:
    if path == "-":
        return TabulatedFunction.loads(sys.stdin.read())
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return TabulatedFunction.loads(text)
    except FunctionFormatError as exc:
        raise FunctionFormatError(f"{path}: {exc}") from None


def _write(cfg: RunConfig, doc) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if cfg.output == "-":
        sys.stdout.write(text)
    else:
        with open(cfg.output, "w") as fh:
            fh.write(text)


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands --------------------------------------------------------------------------

def cmd_check(cfg: RunConfig) -> int:
    f = _load(cfg.input_path)
    kw = {"exhaustive": cfg.exhaustive}
    if cfg.axiom != "descent-lemma":
        kw["threads"] = cfg.threads
    rep = axioms.check_axiom(f, cfg.axiom, **kw)
    _write(cfg, rep.to_json())
    if rep.passed:
        _say(f"{cfg.axiom}: pass ({len(f)} points)")
        return EXIT_OK
    bad = rep.violation if hasattr(rep, "violation") else next(
        r.violation for r in rep.parts().values() if not r.passed)
    _say(f"{cfg.axiom}: FAIL at x={list(bad.x)} y={list(bad.y)} i={bad.i}")
    return EXIT_FAIL


def cmd_minimize(cfg: RunConfig) -> int:
    f = _load(cfg.input_path)
    strict = cfg.strict if cfg.strict is not None else len(f) <= STRICT_LIMIT
    try:
        if cfg.algorithm == "domain-reduction":
            res = minimize(f, "domain-reduction", strict=strict)
        elif cfg.algorithm == "modified":
            res = minimize(f, "modified", cfg.start_point, box=cfg.box, strict=strict)
        else:
            res = minimize(f, "basic", cfg.start_point, strict=strict)
    except PreconditionError as exc:
        _write(cfg, exc.report.to_json() if exc.report is not None else {"error": str(exc)})
        _say(f"precondition failed: {exc}")
        return EXIT_PRECONDITION
    except PeelError as exc:
        _say(f"domain reduction failed: {exc}")
        return EXIT_PRECONDITION
    doc = {
        "algorithm": cfg.algorithm,
        "minimizer": list(res.minimizer),
        "value": value_to_json(res.value),
        "iterations": res.iterations,
    }
    if cfg.trace:
        doc["trace"] = res.state.to_json() if cfg.algorithm == "domain-reduction" else res.to_json()
    _write(cfg, doc)
    _say(f"{cfg.algorithm}: minimizer {list(res.minimizer)} value {value_to_json(res.value)} "
         f"after {res.iterations} iterations")
    return EXIT_OK


def _bridge_verdicts(f) -> list[analysis.TheoremVerdict]:
    lifted = analysis.project_to_m(f)
    m = axioms.check_m_exc(lifted).passed
    mn = axioms.check_mnat_exc(f).passed
    sq = axioms.check_ssqm(lifted).passed
    prj = axioms.check_ssqm_nat_prj(f)
    sn = axioms.check_ssqm_nat(f).passed
    out = [
        analysis.TheoremVerdict("projection-bridge:m-exc", analysis.HOLDS if m == mn else analysis.FAILS,
                                None, {"lifted_m_exc": m, "mnat_exc": mn}),
        analysis.TheoremVerdict("projection-bridge:ssqm", analysis.HOLDS if sq == prj.passed else analysis.FAILS,
                                None, {"lifted_ssqm": sq, "ssqm_nat_prj": prj.passed}),
        analysis.TheoremVerdict("projection-bridge:prj-implies-ssqm-nat",
                                analysis.HOLDS if (not prj.passed or sn) else analysis.FAILS,
                                None, {"ssqm_nat_prj": prj.passed, "ssqm_nat": sn}),
    ]
    return out


def cmd_verify(cfg: RunConfig) -> int:
    f = _load(cfg.input_path)
    th = cfg.theorem
    if th == "projection-bridge":
        verdicts = _bridge_verdicts(f)
    elif th == "proximity":
        verdicts = [analysis.verify_proximity(f, cfg.alpha, cfg.regime)]
    elif th == "local-global":
        verdicts = analysis.sweep(f, "local-global" if cfg.regime == "mnat" else "local-global-m")
    else:
        verdicts = analysis.sweep(f, th)
    _write(cfg, [v.to_json() for v in verdicts])
    failed = [v for v in verdicts if v.status == analysis.FAILS]
    if not failed:
        skipped = sum(1 for v in verdicts if v.status == analysis.NOT_MET)
        _say(f"{th}: holds in {len(verdicts) - skipped} contexts ({skipped} with hypothesis not met)")
        return EXIT_OK
    first = failed[0]
    ctx = first.counter_context
    where = {k: ctx[k] for k in ("x", "pair", "gap", "max_gap", "worst_x") if k in ctx}
    _say(f"{th}: FAILS in {len(failed)} of {len(verdicts)} contexts; first: {where}")
    return EXIT_FAIL


def cmd_gallery(cfg: RunConfig) -> int:
    if cfg.list:
        for name in gallery.GALLERY:
            _say(name)
        return EXIT_OK
    if cfg.audit:
        rows = gallery.audit()
        bad = [r for r in rows if not r[3]]
        for name, e, observed, ok in rows:
            log.info("%s %s %s %s -> %s", "ok " if ok else "BAD", name, e.check, dict(e.args), observed)
        _write(cfg, [{"entry": name, **e.to_json(), "observed": observed, "ok": ok} for name, e, observed, ok in rows])
        _say(f"gallery audit: {len(rows) - len(bad)}/{len(rows)} expectations replayed")
        return EXIT_FAIL if bad else EXIT_OK
    if cfg.name is None:
        raise UsageError("gallery needs --name, --audit or --list")
    try:
        entry = gallery.get_entry(cfg.name, k=cfg.k)
    except (KeyError, ValueError) as exc:
        raise UsageError(str(exc.args[0])) from None
    doc = entry.function.to_json()
    target = cfg.emit if cfg.emit is not None else cfg.output
    text = json.dumps(doc, indent=1) + "\n"
    if target == "-":
        sys.stdout.write(text)
    else:
        with open(target, "w") as fh:
            fh.write(text)
    _say(f"{entry.name}: {len(entry.function)} points")
    return EXIT_OK


COMMANDS = {"check": cmd_check, "minimize": cmd_minimize, "verify": cmd_verify, "gallery": cmd_gallery}


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if getattr(ns, "threads", None) is None and "QUASIMNAT_THREADS" in os.environ:
        ns.threads = axioms.default_threads()
    try:
        cfg = RunConfig.from_args(ns)
        cfg.list = getattr(ns, "list", False)
        return COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except (FunctionFormatError, EmptyDomainError) as exc:
        _say(f"input error: {exc}")
        return EXIT_USAGE
    except NotInDomainError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except (ValueError, IndexError) as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
