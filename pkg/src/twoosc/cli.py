"""Command-line driver: ``twoosc <subcommand> [options]``.

Every subcommand produces a report ``{tool, version, config, checks,
passed}``; each check is ``{name, status, residual, location}``.  Exit code
0 means every check passed, 1 means some check failed and 2 is a usage or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

import numpy as np

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
DEFAULT_SEED = 20240601
SUBCOMMANDS = ("qybe", "relations", "consistency", "dual-verify", "fock-verify", "coherent", "all")


class UsageError(Exception):
    pass


def _check(name, ok, residual=None, location=None):
    return {
        "name": name,
        "status": "pass" if ok else "fail",
        "residual": residual,
        "location": location,
    }


def _family(name):
    from .rmatrix import FAMILIES

    if name not in FAMILIES:
        raise UsageError(f"unknown family {name!r}; expected one of {', '.join(FAMILIES)}")
    return name


def _families(args):
    from .rmatrix import FAMILIES

    return [_family(args.family)] if getattr(args, "family", None) else list(FAMILIES)


# -- symbolic suites ----------------------------------------------------------


def run_qybe(args):
    from .rmatrix import build_family, check_qybe, numeric_qybe, random_assignment

    checks = []
    for fam in _families(args):
        R = build_family(fam)
        res = check_qybe(R)
        first = min(res) if res else None
        checks.append(
            _check(
                f"qybe {fam}",
                not res,
                "symbolic zero" if not res else str(res[first]),
                None if not res else f"row {first[0]}, col {first[1]}",
            )
        )
        rng = random.Random(args.seed)
        worst = max(numeric_qybe(R, random_assignment(R.ring, rng)) for _ in range(args.samples))
        checks.append(_check(f"qybe-numeric {fam}", worst <= 1e-9, worst))
    return checks


def run_relations(args):
    from .rmatrix import RelationSet, build_family, derive_relations, family_ring, load_golden

    checks = []
    for fam in _families(args):
        derived = derive_relations(build_family(fam))
        if args.golden:
            try:
                with open(args.golden, encoding="utf-8") as fh:
                    golden = RelationSet.from_text(fh.read(), family_ring(fam))
            except OSError as exc:
                raise UsageError(f"cannot read golden file: {exc}") from None
        else:
            golden = load_golden(fam)
        missing, extra = derived.difference(golden)
        ok = derived.same_span(golden)
        loc = None
        if not ok:
            loc = "; ".join(
                [f"derived only: {e.to_text()} = 0" for e in missing] + [f"golden only: {e.to_text()} = 0" for e in extra]
            )
        checks.append(_check(f"relations {fam}", ok, len(missing) + len(extra), loc))
        if derived.unresolved:
            checks.append(_check(f"relations-resolved {fam}", False, len(derived.unresolved)))
    return checks


def run_consistency(args):
    from .rmatrix import build_family, check_consistency, constrained_entries

    checks = []
    for fam in _families(args):
        R = build_family(fam)
        rep = check_consistency(R)
        loc = "; ".join(label for label, _ in rep["violations"][:5]) or None
        checks.append(_check(f"consistency {fam}", rep["passed"], len(rep["violations"]), loc))
        rng = random.Random(args.seed)
        keys = constrained_entries(R)
        missed = []
        for key in rng.sample(keys, min(args.perturbations, len(keys))):
            if check_consistency(R.perturbed(key))["passed"]:
                missed.append("".join(map(str, key)))
        checks.append(
            _check(f"perturbation {fam}", not missed, len(missed), ", ".join(missed) or None)
        )
    return checks


def run_dual(args):
    from .hopf import lambda_identities, verify_dual_relations
    from .rmatrix import build_family, derive_relations

    checks = []
    for fam in _families(args):
        R = build_family(fam)
        rs = derive_relations(R).rewrite_system(fam)
        rep = verify_dual_relations(R, D=args.degree, rs=rs, corrected=args.corrected)
        for rec in rep["records"]:
            V, W = rec["bracket"]
            bad = rec["failures"]
            loc = None
            if bad:
                mono, val = bad[0]
                loc = f"monomial {mono}: {val}"
            checks.append(_check(f"dual {fam} [{V},{W}] {rec['kind']}", not bad, len(bad), loc))
        if fam != "IDENTITY":
            for r in range(1, args.lambda_order + 1):
                for name, (val, want) in lambda_identities(rs, r).items():
                    checks.append(_check(f"lambda {fam} r={r} {name}", val == want, str(val - want)))
    return checks


# -- numeric suites -----------------------------------------------------------


def _read_params(path):
    from .coeff import CoefficientError, parse_assignments
    from .fock import PARAM_KEYS

    try:
        with open(path, encoding="utf-8") as fh:
            raw = parse_assignments(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read parameter file: {exc}") from None
    except CoefficientError as exc:
        raise UsageError(f"bad parameter file: {exc}") from None
    unknown = sorted(set(raw) - set(PARAM_KEYS))
    if unknown:
        raise UsageError(f"unknown parameter(s) {', '.join(unknown)}; allowed: {', '.join(PARAM_KEYS)}")
    out = {k: float(v) for k, v in raw.items()}
    if "sign" in out:
        out["sign"] = int(out["sign"])
    return out


def run_fock(args):
    from .fock import (
        APPB_FAMILIES,
        REALIZATION_FAMILIES,
        FockSpace,
        InvalidRealization,
        appendixB_residual,
        check_relations,
        random_params,
        realize,
    )

    fams = [args.realization] if args.realization else list(REALIZATION_FAMILIES)
    for f in fams:
        if f not in REALIZATION_FAMILIES:
            raise UsageError(f"unknown realization family {f!r}; expected one of {', '.join(REALIZATION_FAMILIES)}")
    space = FockSpace(args.n_boson)
    fixed = _read_params(args.params) if args.params else None
    rng = np.random.default_rng(args.seed)
    checks = []
    for fam in fams:
        draws = [fixed] if fixed is not None else [random_params(fam, rng) for _ in range(args.draws)]
        worst = {}
        appb = 0.0
        for P in draws:
            try:
                ops = realize(fam, P, space)
            except InvalidRealization as exc:
                raise UsageError(str(exc)) from None
            rep = check_relations(ops, tol=args.tol, safe_band=args.safe_band)
            for rec in rep["records"]:
                worst[rec["name"]] = max(worst.get(rec["name"], 0.0), rec["residual"])
            if fam in APPB_FAMILIES:
                appb = max(appb, float(np.abs(appendixB_residual(fam, P)).max()))
        for name, res in worst.items():
            checks.append(_check(f"fock {fam} {name}", res <= args.tol, res))
        if fam in APPB_FAMILIES:
            checks.append(_check(f"coefficient-system {fam}", appb <= 1e-12, appb))
    return checks


def _complex(text):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise UsageError(f"bad complex value {text!r}; expected re,im") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise UsageError(f"bad complex value {text!r}; expected re,im")
    return complex(parts[0], parts[1])


def run_coherent(args):
    from .coherent import (
        AnnihilatorSpec,
        InvalidVariant,
        TruncationRisk,
        UnexpectedKernel,
        build_annihilator,
        coherent_closed_form,
        coherent_numeric_kernel,
        hamiltonian_H0,
        kernel_angles,
        pseudo_hermitian_transform,
    )
    from .fock import FockSpace

    space = FockSpace(args.n_boson)
    Z = _complex(args.Z)
    try:
        spec = AnnihilatorSpec(args.variant.upper(), args.x, args.z, args.omega)
    except InvalidVariant as exc:
        raise UsageError(str(exc)) from None
    checks = []
    try:
        cf = coherent_closed_form(spec, Z, space, printed=args.printed, safe_band=args.safe_band)
    except TruncationRisk as exc:
        return [_check("coherent truncation", False, None, str(exc))]
    for label, res in zip(cf["labels"], cf["residuals"]):
        checks.append(_check(f"coherent eigen-residual {label}", res <= 1e-8, res))
    try:
        ker = coherent_numeric_kernel(build_annihilator(spec, space), Z, space, args.safe_band)
        ang = float(kernel_angles(cf["states"], ker["states"]).max())
        checks.append(_check("coherent kernel angle", ang <= 1e-6, ang))
    except UnexpectedKernel as exc:
        checks.append(_check("coherent kernel", False, None, str(exc)))
    if spec.variant == "ISO":
        checks.append(_check("coherent orthogonality", cf["overlap"] <= 1e-10, cf["overlap"]))
        _, rep = hamiltonian_H0(spec, space, safe_band=args.safe_band, printed=args.printed)
        checks.append(_check("H0 spectrum", rep["spectrum_error"] <= 1e-8 * spec.omega, rep["spectrum_error"]))
        for name, res in rep["ladder"].items():
            checks.append(_check(f"H0 {name}", res <= 1e-10, res))
        worst = max(e["residual"] for e in rep["eigenstates"])
        checks.append(_check("H0 eigenstates", worst <= 1e-8, worst))
        b = pseudo_hermitian_transform(args.rho_tilde, args.tau_tilde, spec, space, safe_band=args.safe_band)
        for name, res in b["relations"].items():
            checks.append(_check(f"T-transformed {name}", res <= 1e-8, res))
        checks.append(_check("pseudo-hermiticity", b["pseudo_hermiticity"] <= 1e-8, b["pseudo_hermiticity"]))
        checks.append(_check("H spectrum", b["spectrum_error"] <= 1e-7 * spec.omega, b["spectrum_error"]))
        checks.append(_check("eta positive", b["eta_min_eigenvalue"] > 0, b["eta_min_eigenvalue"]))
    return checks


def run_all(args):
    checks = []
    for fn in (run_qybe, run_relations, run_consistency, run_dual, run_fock):
        checks += fn(args)
    for variant in ("SUPER", "ISO"):
        sub = argparse.Namespace(**vars(args))
        sub.variant = variant
        checks += [dict(c, name=f"{variant.lower()} {c['name']}") for c in run_coherent(sub)]
    return checks


RUNNERS = {
    "qybe": run_qybe,
    "relations": run_relations,
    "consistency": run_consistency,
    "dual-verify": run_dual,
    "fock-verify": run_fock,
    "coherent": run_coherent,
    "all": run_all,
}


# -- argument parsing ---------------------------------------------------------


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for randomized checks")
    common.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    common.add_argument("--output", "--report", dest="output", help="write the report here instead of stdout")

    def fam(p, required=False):
        p.add_argument("--family", required=required, help="R-matrix family (default: all bundled families)")

    def fock_opts(p):
        p.add_argument("--n-boson", type=_positive_int, default=60)
        p.add_argument("--safe-band", type=_positive_int, default=5)
        p.add_argument("--tol", type=_positive_float, default=1e-10)

    def coherent_opts(p):
        p.add_argument("--x", type=float, default=0.5)
        p.add_argument("--z", type=float, default=0.3)
        p.add_argument("--omega", type=_positive_float, default=1.0)
        p.add_argument("--Z", default="0.5,0.25", help="eigenvalue as re,im")
        p.add_argument("--rho-tilde", type=float, default=0.3)
        p.add_argument("--tau-tilde", type=float, default=0.2)
        p.add_argument("--printed", action="store_true", help="use the literal closed forms instead of the solved ones")

    def dual_opts(p, degree):
        p.add_argument("--degree", type=_positive_int, default=degree, help="degree bound D")
        p.add_argument("--lambda-order", type=int, default=8, help="check Lambda identities for r <= this")
        p.add_argument("--corrected", action="store_true", help="use the computed sign of the tau term")

    parser = _Parser(prog="twoosc", description="Verification pipelines for two-oscillator quantum supergroups.")
    parser.add_argument("--version", action="version", version=f"twoosc {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("qybe", parents=[common], help="symbolic QYBE check")
    fam(p)
    p.add_argument("--samples", type=_positive_int, default=3, help="numeric oracle draws")
    p = sub.add_parser("relations", parents=[common], help="derive relations and compare with a golden file")
    fam(p)
    p.add_argument("--golden", help="golden relation file (default: bundled)")
    p = sub.add_parser("consistency", parents=[common], help="consistency relations and perturbations")
    fam(p)
    p.add_argument("--perturbations", type=_positive_int, default=10)
    p = sub.add_parser("dual-verify", parents=[common], help="dual superalgebra relations by pairing")
    fam(p)
    dual_opts(p, 6)
    p = sub.add_parser("fock-verify", parents=[common], help="Fock realization residuals")
    p.add_argument("--family", dest="realization", help="realization family (default: all)")
    p.add_argument("--params", help="parameter file with name = value lines")
    p.add_argument("--draws", type=_positive_int, default=50)
    fock_opts(p)
    p = sub.add_parser("coherent", parents=[common], help="deformed coherent states and spectra")
    p.add_argument("--variant", choices=("iso", "super", "ISO", "SUPER"), default="iso")
    coherent_opts(p)
    fock_opts(p)
    p = sub.add_parser("all", parents=[common], help="every suite")
    p.add_argument("--samples", type=_positive_int, default=3)
    p.add_argument("--golden", default=None)
    p.add_argument("--perturbations", type=_positive_int, default=10)
    p.add_argument("--params", default=None)
    p.add_argument("--draws", type=_positive_int, default=10)
    p.set_defaults(family=None, realization=None)
    dual_opts(p, 4)
    coherent_opts(p)
    fock_opts(p)
    return parser


def _jsonable(v):
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, complex):
        return [v.real, v.imag]
    return str(v)


def make_report(args, checks):
    config = {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in ("output", "format")}
    checks = [{k: _jsonable(v) for k, v in c.items()} for c in checks]
    return {
        "tool": "twoosc",
        "version": __version__,
        "config": config,
        "checks": checks,
        "passed": all(c["status"] == "pass" for c in checks),
    }


def format_text(report):
    lines = [f"twoosc {report['version']} {report['config'].get('command')}"]
    for c in report["checks"]:
        extra = ""
        if c["residual"] is not None:
            extra += f"  residual: {c['residual']}"
        if c["location"]:
            extra += f"  at: {c['location']}"
        lines.append(f"[{c['status'].upper()}] {c['name']}{extra}")
    n_fail = sum(c["status"] != "pass" for c in report["checks"])
    lines.append(f"{'PASSED' if report['passed'] else 'FAILED'}: {len(report['checks']) - n_fail} passed, {n_fail} failed")
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; expected one of " + ", ".join(SUBCOMMANDS))
        checks = RUNNERS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = make_report(args, checks)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n" if args.format == "json" else format_text(report)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
