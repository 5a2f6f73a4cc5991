"""Command-line front end.

Subcommands ``classes``, ``goodrep``, ``dimtable``, ``flagcheck`` and
``slicecheck``.  Exit codes: 0 all checks pass, 1 bad configuration,
2 theorem violation, 3 existence failure, 4 resource bound.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .dimledger import dimension_table, partitions, psi_pairing, records_csv
from .errors import (
    ConfigurationError,
    DependencyError,
    DomainError,
    ExistenceFailure,
    ResourceError,
)
from .goodrep import canonical_certificate, certificates_json, good_rep_table
from .weyl import classes_json, named_twist, twisted_conjugacy_classes, weyl_group

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VIOLATION = 2
EXIT_EXISTENCE = 3
EXIT_RESOURCE = 4

RUN_SCHEMA_VERSION = 1
SUITES = ("isotropy", "orbits", "eta", "bundle", "fullflag", "finiteness", "xtilde", "all")


@dataclass
class RunConfig:
    command: str
    type_label: str | None = None
    rank: int | None = None
    n: int | None = None
    q: int | None = None
    k: int = 1
    twist: str = "id"
    d_max: int | None = None
    out: str | None = None
    suite: str = "all"
    lift: str = "good"
    timing: bool = True
    checks: list = field(default_factory=list)

    def validate(self) -> None:
        if self.command in ("classes", "goodrep"):
            if self.type_label is None or self.rank is None:
                raise ConfigurationError(f"{self.command} needs --type and --rank")
        if self.command in ("dimtable", "flagcheck", "slicecheck") and self.n is None:
            raise ConfigurationError(f"{self.command} needs --n")
        if self.command in ("flagcheck", "slicecheck"):
            if self.q is None:
                raise ConfigurationError(f"{self.command} needs --q")
            if self.n < 2:
                raise ConfigurationError("n must be at least 2")
        if self.k < 1:
            raise ConfigurationError("k must be positive")
        if self.d_max is not None and self.d_max < 1:
            raise ConfigurationError("--dmax must be positive")
        if self.suite not in SUITES:
            raise ConfigurationError(f"unknown suite {self.suite!r}")
        self.checks = suite_checks(self.suite, self.k)


def suite_checks(suite: str, k: int) -> list[str]:
    y_side = ["orbits", "stabilizer", "eta", "bundle", "fullflag", "finiteness"]
    table = {
        "isotropy": ["stabilizer", "orbits"] + (["xtilde"] if k > 1 else []),
        "orbits": ["orbits"],
        "eta": ["eta"],
        "bundle": ["bundle"],
        "fullflag": ["fullflag"],
        "finiteness": ["finiteness"],
        "xtilde": ["xtilde"],
        "all": y_side + ["xtilde"],
    }
    return table[suite]


# --- commands ---------------------------------------------------------------


def cmd_classes(cfg: RunConfig) -> tuple[str, int]:
    g = weyl_group(cfg.type_label, cfg.rank)
    classes = twisted_conjugacy_classes(g, named_twist(g.rs, cfg.twist))
    return classes_json(classes), EXIT_OK


def cmd_goodrep(cfg: RunConfig) -> tuple[str, int]:
    g = weyl_group(cfg.type_label, cfg.rank)
    reports = good_rep_table(g, named_twist(g.rs, cfg.twist), cfg.d_max, all_members=False, lift=cfg.lift)
    failed = any(r.canonical is None for r in reports)
    return certificates_json(reports, cfg.d_max), EXIT_EXISTENCE if failed else EXIT_OK


def cmd_dimtable(cfg: RunConfig) -> tuple[str, int]:
    records = dimension_table(cfg.n)
    ok = all(r.identity_holds for r in records)
    return records_csv(records), EXIT_OK if ok else EXIT_VIOLATION


def _certificates_of_Sn(n: int):
    g = weyl_group("A", n - 1)
    reports = good_rep_table(g, named_twist(g.rs, "id"))
    for r in reports:
        if r.canonical is None:
            raise ExistenceFailure(f"class {r.cls.class_id} of S_{n} has no certificate")
    return [c for r in reports for c in r.certificates]


def _run_cert(cfg: RunConfig, cert) -> list:
    from .flaglab import checks as ck
    from .flaglab.subgroups import CertContext
    from .flaglab.varieties import check_Y_bounds, enumerate_X, enumerate_Ytilde, relpos_mask

    out = []
    y_checks = [c for c in cfg.checks if c != "xtilde"]
    if y_checks:
        check_Y_bounds(cfg.n, cfg.q)
        ctx = CertContext(cert, cfg.q)
        yt = enumerate_Ytilde(ctx) if {"orbits", "stabilizer"} & set(y_checks) else None
        D = relpos_mask(ctx).nonzero()[0]
        for name in y_checks:
            if name == "orbits":
                out.append(ck.orbit_report_Y(ctx, yt))
            elif name == "stabilizer":
                out.append(ck.stabilizer_check_Ytilde(ctx, yt))
            elif name == "eta":
                out.append(ck.eta_check(ctx))
            elif name == "bundle":
                out.append(ck.L_orbit_check(ctx, D))
                out.append(ck.covering_check(ctx, yt or enumerate_Ytilde(ctx), D))
            elif name == "fullflag":
                out.append(ck.isotropy_bound_full_flag(ctx))
            elif name == "finiteness":
                out.extend(ck.orbit_finiteness_check(ctx, lam.parts, D) for lam in partitions(cfg.n))
    if "xtilde" in cfg.checks:
        out.append(ck.xtilde_check(enumerate_X(cfg.n, cfg.q, cfg.k, cert)))
    return out


def _report_document(cfg: RunConfig, rows: list) -> str:
    doc = {
        "schema": RUN_SCHEMA_VERSION,
        "command": cfg.command,
        "n": cfg.n,
        "q": cfg.q,
        "k": cfg.k,
        "suite": cfg.suite,
        "violations_total": sum(len(r["violations"]) for r in rows),
        "reports": rows,
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def cmd_flagcheck(cfg: RunConfig) -> tuple[str, int]:
    rows = []
    for cert in _certificates_of_Sn(cfg.n):
        for rep in _run_cert(cfg, cert):
            row = rep.to_json(timing=cfg.timing)
            row["certificate"] = cert.to_json()
            rows.append(row)
    text = _report_document(cfg, rows)
    return text, EXIT_VIOLATION if any(r["violations"] for r in rows) else EXIT_OK


def cmd_slicecheck(cfg: RunConfig) -> tuple[str, int]:
    from .flaglab.checks import slice_check
    from .flaglab.subgroups import CertContext
    from .flaglab.varieties import check_Y_bounds

    check_Y_bounds(cfg.n, cfg.q)
    rows = []
    for lam in partitions(cfg.n):
        cert = canonical_certificate(psi_pairing(cfg.n, lam))
        row = slice_check(CertContext(cert, cfg.q), lam.parts).to_json(timing=cfg.timing)
        row["certificate"] = cert.to_json()
        rows.append(row)
    text = _report_document(cfg, rows)
    return text, EXIT_VIOLATION if any(r["violations"] for r in rows) else EXIT_OK


COMMANDS = {
    "classes": cmd_classes,
    "goodrep": cmd_goodrep,
    "dimtable": cmd_dimtable,
    "flagcheck": cmd_flagcheck,
    "slicecheck": cmd_slicecheck,
}


# --- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors, not theorem violations
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="goodpos", description="Good position braid representatives and flag variety checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--no-timing", dest="timing", action="store_false", help="omit runtimes for byte-stable output")

    for name in ("classes", "goodrep"):
        sp = sub.add_parser(name)
        sp.add_argument("--type", dest="type_label", required=True)
        sp.add_argument("--rank", type=int, required=True)
        sp.add_argument("--twist", default="id", help="id, flip, rot or 1-based images such as 3,2,1")
        if name == "goodrep":
            sp.add_argument("--dmax", dest="d_max", type=int)
            sp.add_argument("--lift", choices=("good", "simple"), default="good")
        common(sp)

    sp = sub.add_parser("dimtable")
    sp.add_argument("--n", type=int, required=True)
    common(sp)

    for name in ("flagcheck", "slicecheck"):
        sp = sub.add_parser(name)
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--q", type=int, required=True)
        if name == "flagcheck":
            sp.add_argument("--k", type=int, default=1)
            sp.add_argument("--suite", choices=SUITES, default="all")
        common(sp)
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    keys = RunConfig.__dataclass_fields__
    cfg = RunConfig(**{k: v for k, v in vars(ns).items() if k in keys and v is not None})
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        text, code = COMMANDS[cfg.command](cfg)
    except (ConfigurationError, DomainError) as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ResourceError as e:
        print(f"resource bound: {e}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ExistenceFailure, DependencyError) as e:
        print(f"existence failure: {e}", file=sys.stderr)
        return EXIT_EXISTENCE
    if not text.endswith("\n"):
        text += "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
