"""Command-line entry point.

Verbs: build, verify, typicality, replicate, twist, heisenberg, export.
Exit codes: 0 all checks passed, 1 a mathematical verification failed,
2 invalid input or configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from superkac import heisenberg as hsb
from superkac import jsonio
from superkac import matryoshka as mat
from superkac.algebra import (InputError, SuperAlgebraSpec,
                              build_fundamental_rep, check_super_relations,
                              grading_report, structure_constants,
                              super_jacobi_report)
from superkac.evenrep import build_even_irrep
from superkac.kacmod import induce, kac_typicality, singular_vectors
from superkac.report import VerificationReport

ACTIONS = ("build", "verify", "typicality", "replicate", "twist",
           "heisenberg", "export")


@dataclass
class JobConfig:
    action: str
    flavor: str = "sl"
    m: int = 2
    n: int = 1
    labels: tuple = ()
    b: object = "symbolic"        # "symbolic" | Fraction
    c: object = "symbolic"
    N: int = 2
    lambdas: tuple = ()
    nu: tuple = ()
    n_twist: int = 2
    out: str | None = None
    report: str | None = None

    def __post_init__(self):
        if self.action not in ACTIONS:
            raise InputError(f"unknown action {self.action!r}")
        if self.m < 1 or self.n < 1:
            raise InputError("m and n must be positive integers")

    def bindings(self) -> dict:
        out = {}
        if isinstance(self.b, Fraction):
            out["b"] = self.b
        if self.flavor == "gl" and isinstance(self.c, Fraction):
            out["c"] = self.c
        return out


def _parse_fraction_list(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(Fraction(chunk.strip()) for chunk in text.split(","))


def _parse_int_list(text: str) -> tuple:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(chunk.strip()) for chunk in text.split(","))


def _parse_symbolic_or_fraction(text: str):
    return "symbolic" if text == "symbolic" else Fraction(text)


def config_from_args(args: argparse.Namespace) -> JobConfig:
    values = {
        "action": args.action,
        "flavor": args.algebra,
        "m": args.m,
        "n": args.n,
        "labels": _parse_int_list(args.labels),
        "b": _parse_symbolic_or_fraction(args.b),
        "c": _parse_symbolic_or_fraction(args.c),
        "N": args.N,
        "lambdas": _parse_fraction_list(args.lambdas),
        "nu": _parse_fraction_list(args.nu),
        "n_twist": args.n_twist,
        "out": args.out,
        "report": args.report,
    }
    if args.config:
        with open(args.config, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
        known = {f.name for f in fields(JobConfig)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise InputError(f"unknown config fields rejected: {unknown}")
        flag_name = {"flavor": "algebra"}
        for key, value in raw.items():
            if key == "labels":
                value = tuple(int(x) for x in value)
            elif key in ("lambdas", "nu"):
                value = tuple(Fraction(x) for x in value)
            elif key in ("b", "c") and value != "symbolic":
                value = Fraction(value)
            if flag_name.get(key, key) not in _explicit_flags(args):
                values[key] = value
    return JobConfig(**values)


def _explicit_flags(args: argparse.Namespace) -> set:
    return set(getattr(args, "_explicit", ()))


class _TrackingParser(argparse.ArgumentParser):
    """Remembers which destination names were set on the command line."""

    def parse_args(self, argv=None, namespace=None):
        namespace = super().parse_args(argv, namespace)
        explicit = set()
        argv = sys.argv[1:] if argv is None else list(argv)
        for action in self._actions:
            for opt in action.option_strings:
                if any(chunk == opt or chunk.startswith(opt + "=")
                       for chunk in argv):
                    explicit.add(action.dest)
        namespace._explicit = explicit
        return namespace


def make_parser() -> _TrackingParser:
    parser = _TrackingParser(
        prog="superkac",
        description="Exact Kac modules of gl/sl(m|n) with a symbolic odd "
                    "label, their indecomposable nested replications, twists "
                    "and Heisenberg-superalgebra structure.")
    parser.add_argument("action", choices=ACTIONS)
    parser.add_argument("--algebra", choices=("sl", "gl"), default="sl")
    parser.add_argument("--m", type=int, default=2)
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--labels", default="",
                        help="comma-separated even Dynkin labels, e.g. '1,0'")
    parser.add_argument("--b", default="symbolic",
                        help="'symbolic' or a rational like 5/7")
    parser.add_argument("--c", default="symbolic",
                        help="gl central charge: 'symbolic' or a rational")
    parser.add_argument("--N", type=int, default=2,
                        help="number of replication copies")
    parser.add_argument("--lambdas", default="",
                        help="comma-separated coupling scalars, e.g. '2,-3/5'")
    parser.add_argument("--nu", default="",
                        help="twist direction on (y, z0), e.g. '1,0'")
    parser.add_argument("--n-twist", dest="n_twist", type=int, default=2)
    parser.add_argument("--out", default=None, help="artifact JSON path")
    parser.add_argument("--report", default=None, help="report JSON path")
    parser.add_argument("--config", default=None,
                        help="JSON JobConfig file; explicit flags win")
    return parser


def _build_stack(cfg: JobConfig):
    spec = SuperAlgebraSpec(cfg.m, cfg.n, cfg.flavor)
    rep = build_fundamental_rep(spec)
    sc = structure_constants(rep)
    labels = cfg.labels if cfg.labels else tuple([0] * spec.rank)
    L = build_even_irrep(rep.datum, labels, sc)
    K = induce(L, rep.datum, sc)
    return spec, rep, sc, K


def _emit(cfg: JobConfig, artifact: dict | None,
          report: VerificationReport | None) -> None:
    if artifact is not None and cfg.out:
        jsonio.export_json(artifact, cfg.out)
        print(f"wrote {cfg.out}")
    if report is not None:
        print(report.summary())
        if cfg.report:
            jsonio.export_json(jsonio.report_to_json(report), cfg.report)
            print(f"wrote {cfg.report}")


def run(cfg: JobConfig) -> int:
    bindings = cfg.bindings()

    if cfg.action in ("build", "export"):
        if cfg.action == "export" and not cfg.out:
            raise InputError("export needs --out")
        spec, rep, sc, K = _build_stack(cfg)
        print(f"{spec} a={list(K.labels)}: Kac module of dimension {K.dim} "
              f"(2^{K.odd_count} x {K.L.dim}), params {list(K.params)}")
        artifact = jsonio.module_to_json(K, bindings or None)
        _emit(cfg, artifact, None)
        return 0

    if cfg.action == "verify":
        spec, rep, sc, K = _build_stack(cfg)
        report = VerificationReport(f"verification of {spec} a={list(K.labels)}")
        report.extend(super_jacobi_report(sc))
        report.extend(grading_report(sc))
        report.extend(check_super_relations(
            K.matrices, sc, f"Kac module relations, symbolic b"))
        degs = VerificationReport("degree profile")
        bad = [str(lab) for lab, m in K.matrices.items()
               if (lab.kind == "u" and m.degree("b") > 1)
               or (lab.kind in ("h", "e", "f", "v", "z0") and m.degree("b") > 0)]
        if bad:
            degs.add_fail("deg_b(u) <= 1 and deg_b(h,e,f,v,z0) = 0",
                          ", ".join(bad))
        else:
            degs.add_pass("deg_b(u) <= 1 and deg_b(h,e,f,v,z0) = 0")
        report.extend(degs)
        _emit(cfg, None, report)
        return 0 if report.ok else 1

    if cfg.action == "typicality":
        spec, rep, sc, K = _build_stack(cfg)
        ty = kac_typicality(K)
        print(f"{spec} a={list(K.labels)}")
        print(f"  s(b) = {ty.s_poly}")
        print(f"  factors: {[str(f) for f in ty.factors]}")
        print(f"  s(b) = constant * product(factors): {ty.proportional} "
              f"(constant {ty.constant})")
        print(f"  root multisets coincide: {ty.roots_match}")
        report = VerificationReport(f"typicality of {spec} a={list(K.labels)}")
        if ty.roots_match and ty.proportional:
            report.add_pass("root multiset equality and proportionality")
        else:
            report.add_fail("root multiset equality", str(ty.s_poly))
        if isinstance(cfg.b, Fraction):
            types = ty.vanishing_types(cfg.b)
            verdict = "typical" if not types else f"atypical of type {list(types)}"
            print(f"  at b = {cfg.b}: {verdict}")
            sv = singular_vectors(K, bindings or {"b": cfg.b})
            layers = sorted({v.layer for v in sv.vectors})
            print(f"  singular vectors at layers {layers} "
                  f"({len(sv.vectors)} total)")
        _emit(cfg, None, report)
        return 0 if report.ok else 1

    if cfg.action == "replicate":
        spec, rep, sc, K = _build_stack(cfg)
        lambdas = cfg.lambdas if cfg.lambdas else tuple(
            [Fraction(1)] * (cfg.N - 1))
        rspec = mat.ReplicationSpec(cfg.N, lambdas)
        D = mat.odd_derivative(K, sc)
        module = mat.replicate(K, D, rspec)
        report = VerificationReport(
            f"replication N={cfg.N} couplings={[str(x) for x in lambdas]}")
        report.extend(check_super_relations(module.matrices, sc,
                                            "replicated relations"))
        profile = mat.jordan_minpoly_profile(
            module, bindings or {"b": Fraction(5, 7), "c": Fraction(3, 11)}
            if spec.flavor == "gl" else bindings or {"b": Fraction(5, 7)})
        degrees = sorted(set(profile.values()))
        if degrees == [cfg.N]:
            report.add_pass(f"hypercharge Jordan degree {cfg.N} on every "
                            "weight space")
        else:
            report.add_fail("hypercharge Jordan degree", str(degrees))
        artifact = jsonio.module_to_json(module, bindings or None)
        _emit(cfg, artifact, report)
        return 0 if report.ok else 1

    if cfg.action == "twist":
        spec, rep, sc, K = _build_stack(cfg)
        if not cfg.nu:
            raise InputError("twist needs --nu")
        tspec = mat.TwistSpec(cfg.n_twist, cfg.nu)
        module = mat.twist(K, tspec)
        report = VerificationReport(
            f"twist n={cfg.n_twist} nu={[str(x) for x in tspec.nu]}")
        report.extend(check_super_relations(module.matrices, sc,
                                            "twisted relations"))
        artifact = jsonio.module_to_json(module, bindings or None)
        _emit(cfg, artifact, report)
        return 0 if report.ok else 1

    if cfg.action == "heisenberg":
        spec, rep, sc, K = _build_stack(cfg)
        nu = cfg.nu if cfg.nu else ((1, 0) if spec.flavor == "gl" else (1,))
        tspec = mat.TwistSpec(cfg.n_twist, nu)
        H = hsb.build_heisenberg(sc)
        rho = hsb.rho_family(K, tspec)
        phi = hsb.phi_map(rho, H)
        report = VerificationReport(
            f"Heisenberg structure on {spec} a={list(K.labels)} "
            f"n={cfg.n_twist} nu={[str(x) for x in tspec.nu]}")
        report.extend(hsb.heisenberg_structure_report(H))
        report.extend(hsb.affine_in_t_report(rho))
        report.extend(hsb.check_phi_representation(phi, H))
        report.extend(hsb.mixed_derivative_report(rho))
        report.extend(hsb.compare_with_KH(phi))
        artifact = jsonio.module_to_json(phi, bindings or None)
        _emit(cfg, artifact, report)
        return 0 if report.ok else 1

    raise InputError(f"unhandled action {cfg.action!r}")


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        return run(cfg)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
