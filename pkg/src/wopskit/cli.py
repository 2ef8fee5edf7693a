"""Command-line front end.

    wopskit classify --config run.json [--degree N]
    wopskit verify   --config run.json [--degree N] [--mode verify|explore]
    wopskit export   {moments,wops,recurrence,structure,ddr} --config run.json

Exit codes: 0 all checks passed, 1 a mathematical violation was found,
2 usage or configuration error.  Reports are JSON with rationals written
as "p/q" strings and keys sorted, so identical configs give identical bytes.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import __version__
from .errors import BadParameter, DimensionMismatch, NotQuasiDefinite, WopsError
from .exact_linalg import RMatrix, format_rational
from .functionals import (
    LaguerreJacobi,
    MomentFunctional,
    SimplexJacobi,
    SumFunctional,
    functional_from_descriptor,
)
from .mpoly import MPoly, PolyMatrix, monomials_up_to
from .pearson import (
    PearsonPair,
    L_star_moments,
    appell_pair,
    appell_type_pair,
    example2_pair,
    example2_wedge_pair,
    is_semiclassical,
    kronecker_residuals_up_to,
)
from .recurrence import backward_inverse, build_recurrence, check_rank_conditions, forward_inverse, recurrence_residual
from .semiclassical import (
    compress_ddr,
    compress_structure,
    ddr_coeffs,
    gradient_gram,
    recover_psi,
    structure_coeffs,
)
from .wops import build_monic_wops, orthogonality_defect

log = logging.getLogger("wopskit")

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
EXPORT_SELECTORS = ("moments", "wops", "recurrence", "structure", "ddr")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    functional: MomentFunctional
    pair: PearsonPair
    max_degree: int
    mode: str = "verify"


# -- config ---------------------------------------------------------------------------


def _find_simplex(u: MomentFunctional) -> SimplexJacobi | None:
    if isinstance(u, SimplexJacobi):
        return u
    if isinstance(u, SumFunctional):
        for t in u.terms:
            found = _find_simplex(t)
            if found is not None:
                return found
    return None


def parse_polynomial(text: str, d: int) -> MPoly:
    """Parse a polynomial in x1..xd with rational coefficients, e.g. "x1^2 - 1/3*x1*x2"."""
    import sympy

    symbols = sympy.symbols(f"x1:{d + 1}")
    local = {str(s): s for s in symbols}
    try:
        expr = sympy.sympify(str(text).replace("^", "**"), locals=local, rational=True)
        poly = sympy.Poly(sympy.expand(expr), *symbols)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError, SyntaxError) as exc:
        raise ConfigError(f"cannot parse polynomial {text!r}: {exc}") from None
    terms = {}
    for monom, coeff in poly.terms():
        if not coeff.is_Rational:
            raise ConfigError(f"non-rational coefficient in {text!r}")
        terms[tuple(int(e) for e in monom)] = f"{coeff.p}/{coeff.q}"
    return MPoly(d, terms)


def _pair_from_selector(sel, u: MomentFunctional) -> PearsonPair:
    d = u.d
    if isinstance(sel, dict) and "phi" in sel:
        phi = PolyMatrix.from_rows([[parse_polynomial(e, d) for e in row] for row in sel["phi"]], d)
        psi = PolyMatrix.column([parse_polynomial(e, d) for e in sel["psi"]], d)
        return PearsonPair(phi, psi, sel.get("name", "inline"))

    if isinstance(sel, str):
        name, _, arg = sel.partition(":")
        params: dict = {}
        if arg:
            params["i"] = arg
    elif isinstance(sel, dict) and "builder" in sel:
        name = sel["builder"]
        params = {k: v for k, v in sel.items() if k != "builder"}
    else:
        raise ConfigError("pair must be a builder name, a builder object or inline phi/psi")

    if name in ("appell", "appell_type"):
        simplex = _find_simplex(u)
        alpha0 = params.get("alpha0", simplex.alpha0 if simplex else None)
        beta = params.get("beta", simplex.beta if simplex else None)
        if alpha0 is None or beta is None:
            raise ConfigError(f"pair {name!r} needs alpha0/beta (none found in the functional)")
        if name == "appell":
            return appell_pair(d, alpha0, beta)
        try:
            i = int(params.get("i", 1))
        except ValueError:
            raise ConfigError(f"bad modification index {params.get('i')!r}") from None
        return appell_type_pair(d, alpha0, beta, i)
    if name in ("example2", "example2_wedge"):
        a = params.get("a", u.a if isinstance(u, LaguerreJacobi) else None)
        if a is None:
            raise ConfigError(f"pair {name!r} needs parameters 'a'")
        builder = example2_pair if name == "example2" else example2_wedge_pair
        return builder(d, a)
    raise ConfigError(f"unknown pair selector {name!r}")


def load_config(path: str | Path, degree: int | None = None, mode: str | None = None) -> RunConfig:
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    return config_from_dict(raw, degree, mode)


def config_from_dict(raw: dict, degree: int | None = None, mode: str | None = None) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    try:
        u = functional_from_descriptor(raw.get("functional"))
        pair = _pair_from_selector(raw.get("pair", "appell"), u)
    except (BadParameter, DimensionMismatch, WopsError, ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    if pair.d != u.d:
        raise ConfigError(f"pair has d={pair.d} but functional has d={u.d}")
    N = degree if degree is not None else raw.get("max_degree", 4)
    if not isinstance(N, int) or N < 1:
        raise ConfigError("max_degree must be an integer >= 1")
    mode = mode or raw.get("mode", "verify")
    if mode not in ("verify", "explore"):
        raise ConfigError(f"mode must be 'verify' or 'explore', got {mode!r}")
    return RunConfig(u, pair, N, mode)


# -- serialization helpers ------------------------------------------------------------


def matrix_json(M: RMatrix) -> list[list[str]]:
    return M.to_strings()


def polymatrix_json(M: PolyMatrix) -> list[list[str]]:
    return M.render()


def pair_json(pair: PearsonPair) -> dict:
    return {"name": pair.name, "phi": polymatrix_json(pair.phi), "psi": [e.render() for e in pair.psi.entries],
            "p": pair.p, "q": pair.q, "s": pair.s}


def dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- commands -------------------------------------------------------------------------


def cmd_classify(cfg: RunConfig) -> tuple[dict, int]:
    rep = is_semiclassical(cfg.functional, cfg.pair, cfg.max_degree)
    doc = {
        "command": "classify",
        "functional": cfg.functional.descriptor(),
        "pair": pair_json(cfg.pair),
        "max_degree": cfg.max_degree,
        "p": rep.p,
        "q": rep.q,
        "s": rep.s,
        "det_condition": format_rational(rep.det_condition),
        "residuals_zero": rep.residuals_zero,
        "semiclassical": rep.semiclassical,
        "failures": [
            {"monomial": list(alpha), "residual": [format_rational(e) for e in r.entries]}
            for alpha, r in rep.failures
        ],
    }
    doc["status"] = "pass" if rep.semiclassical else "fail"
    return doc, EXIT_OK if rep.semiclassical else EXIT_VIOLATION


class _Checks:
    def __init__(self, explore: bool):
        self.explore = explore
        self.results: list[dict] = []
        self.violations: list[dict] = []
        self.warnings: list[dict] = []

    def run(self, name: str, fn: Callable[[], object]) -> object:
        try:
            detail = fn()
        except WopsError as exc:
            self.fail(name, f"{type(exc).__name__}: {exc}")
            return None
        self.results.append({"name": name, "ok": True, "detail": detail if detail is not None else ""})
        return detail

    def fail(self, name: str, message: str) -> None:
        self.results.append({"name": name, "ok": False, "detail": message})
        self.violations.append({"check": name, "message": message})

    def band(self, name: str, violations: list[int], what: str) -> None:
        if not violations:
            return
        message = f"{what} nonzero outside the predicted band at indices {violations}"
        if self.explore:
            self.warnings.append({"check": name, "message": message})
        else:
            self.fail(name, message)


def cmd_verify(cfg: RunConfig) -> tuple[dict, int]:
    u, pair, N = cfg.functional, cfg.pair, cfg.max_degree
    checks = _Checks(cfg.mode == "explore")
    s, p = pair.s, pair.p
    basis_degree = N + max(p, s, 1)
    doc = {
        "command": "verify",
        "functional": u.descriptor(),
        "pair": pair_json(pair),
        "max_degree": N,
        "basis_degree": basis_degree,
        "mode": cfg.mode,
    }

    rep = is_semiclassical(u, pair, basis_degree)
    if rep.residuals_zero:
        checks.results.append({"name": "pearson", "ok": True, "detail": f"weak residuals vanish to degree {basis_degree}"})
    else:
        checks.fail("pearson", f"{len(rep.failures)} monomials with nonzero weak residual, first {list(rep.failures[0][0])}")
    if rep.det_condition == 0:
        checks.fail("det_condition", "det<u, Phi> = 0")
    else:
        checks.results.append({"name": "det_condition", "ok": True, "detail": format_rational(rep.det_condition)})

    try:
        basis = build_monic_wops(u, basis_degree)
    except NotQuasiDefinite as exc:
        checks.fail("quasi_definite", f"NotQuasiDefinite({exc.degree})")
        return _finish(doc, checks)
    checks.results.append({"name": "quasi_definite", "ok": True, "detail": f"H_n nonsingular for n <= {basis_degree}"})

    def orthogonality():
        bad = orthogonality_defect(u, basis)
        if bad:
            raise WopsError(f"<u, P_n P_m^t> != 0 for {bad}")

    checks.run("orthogonality", orthogonality)

    rec = checks.run("recurrence", lambda: build_recurrence(u, basis))
    if rec is not None:
        checks.results[-1]["detail"] = f"three-term recurrence exact for n < {basis_degree}"

        def ranks():
            problems = check_rank_conditions(rec)
            if problems:
                raise WopsError("; ".join(problems))

        checks.run("rank_conditions", ranks)

        def inverses():
            for n in range(0, N + 1):
                for i in range(1, u.d + 1):
                    if not recurrence_residual(rec, n, i).is_zero():
                        raise WopsError(f"recurrence residual nonzero at n={n}, i={i}")
                forward_inverse(rec, n)
                if n >= 1:
                    for i in range(1, u.d + 1):
                        backward_inverse(rec, n, i)

        checks.run("inverted_recurrences", inverses)

    def quasi_orthogonality():
        bad = [(m, n) for n in range(s + 1, N + 1) for m in range(n - s)
               if not gradient_gram(u, pair, basis, m, n).is_zero()]
        if bad:
            raise WopsError(f"Q_(m,n) != 0 for (m, n) in {bad}")

    checks.run("quasi_orthogonality", quasi_orthogonality)

    for n in range(1, N + 1):
        sc = checks.run(f"structure[{n}]", lambda n=n: structure_coeffs(u, pair, basis, n, strict=False))
        if sc is not None:
            checks.results[-1]["detail"] = f"nonzero F_j for j in {sc.nonzero()}"
            checks.band(f"structure[{n}]", sc.violations, "F_j")
            if n >= s + 1:
                def compressed(n=n):
                    M1, M2 = compress_structure(pair, basis, n)
                    return f"deg M1 = {M1.degree}, deg M2 = {M2.degree}"
                checks.run(f"structure_compressed[{n}]", compressed)

    for n in range(0, N + 1):
        dd = checks.run(f"ddr[{n}]", lambda n=n: ddr_coeffs(u, pair, basis, n, strict=False))
        if dd is not None:
            checks.results[-1]["detail"] = f"nonzero Lambda_i for i in {dd.nonzero()}"
            checks.band(f"ddr[{n}]", dd.violations, "Lambda_i")
            if n >= s + 1:
                def compressed_ddr(n=n):
                    N1, N2 = compress_ddr(pair, basis, n)
                    return f"deg N1 = {N1.degree}, deg N2 = {N2.degree}"
                checks.run(f"ddr_compressed[{n}]", compressed_ddr)

    def adjoint():
        values = L_star_moments(u, pair, N)
        bad = [list(a) for a, v in zip(monomials_up_to(u.d, N), values) if v != 0]
        if bad:
            raise WopsError(f"<u, L[x^a]> != 0 for a in {bad}")

    checks.run("adjoint", adjoint)

    def psi_recovery():
        psi = recover_psi(u, pair.phi, basis, s)
        if psi != pair.psi:
            raise WopsError(f"recovered Psi {[e.render() for e in psi.entries]} differs from the pair's Psi")

    checks.run("psi_recovery", psi_recovery)

    def kronecker():
        bad = kronecker_residuals_up_to(u, pair, 2, min(N, 4))
        if bad:
            raise WopsError(f"{len(bad)} nonzero Kronecker residuals for h=2")

    checks.run("kronecker", kronecker)
    return _finish(doc, checks)


def _finish(doc: dict, checks: _Checks) -> tuple[dict, int]:
    doc["checks"] = checks.results
    doc["violations"] = checks.violations
    doc["warnings"] = checks.warnings
    doc["status"] = "pass" if not checks.violations else "fail"
    return doc, EXIT_OK if not checks.violations else EXIT_VIOLATION


def cmd_export(cfg: RunConfig, what: str) -> tuple[dict, int]:
    if what not in EXPORT_SELECTORS:
        raise ConfigError(f"unknown export selector {what!r}; choose from {', '.join(EXPORT_SELECTORS)}")
    u, pair, N = cfg.functional, cfg.pair, cfg.max_degree
    doc: dict = {"command": "export", "what": what, "functional": u.descriptor(), "max_degree": N}
    if what == "moments":
        doc["moments"] = {
            "m_" + "_".join(map(str, a)): format_rational(u.moment(a)) for a in monomials_up_to(u.d, N)
        }
        return doc, EXIT_OK

    doc["pair"] = pair_json(pair)
    if what == "wops":
        basis = build_monic_wops(u, N)
        doc["P"] = {str(n): [e.render() for e in basis.P[n].entries] for n in range(N + 1)}
        doc["H"] = {str(n): matrix_json(basis.H[n]) for n in range(N + 1)}
    elif what == "recurrence":
        basis = build_monic_wops(u, N + 1)
        rec = build_recurrence(u, basis)
        out = {}
        for n in range(N + 1):
            entry = {}
            for i in range(1, u.d + 1):
                entry[f"A_{i}"] = matrix_json(rec.A[n, i])
                entry[f"B_{i}"] = matrix_json(rec.B[n, i])
                entry[f"C_{i}"] = matrix_json(rec.C[n, i])
                if n >= 1:
                    entry[f"G_{i}"] = matrix_json(backward_inverse(rec, n, i))
            fw = forward_inverse(rec, n)
            for i, Dt in fw.Dt.items():
                entry[f"Dt_{i}"] = matrix_json(Dt)
            entry["E_n"] = matrix_json(fw.E_n)
            entry["E_prev"] = matrix_json(fw.E_prev)
            out[str(n)] = entry
        doc["recurrence"] = out
    elif what == "structure":
        basis = build_monic_wops(u, N + max(pair.p, 1))
        out = {}
        for n in range(1, N + 1):
            sc = structure_coeffs(u, pair, basis, n, strict=cfg.mode == "verify")
            entry = {"F": {str(j): matrix_json(Fj) for j, Fj in sc.F.items()}}
            if n >= pair.s + 1:
                M1, M2 = compress_structure(pair, basis, n)
                entry["M1"], entry["M2"] = polymatrix_json(M1), polymatrix_json(M2)
            out[str(n)] = entry
        doc["structure"] = out
    elif what == "ddr":
        basis = build_monic_wops(u, N + max(pair.s, 1))
        out = {}
        for n in range(0, N + 1):
            dd = ddr_coeffs(u, pair, basis, n, strict=cfg.mode == "verify")
            entry = {"Lambda": {str(i): matrix_json(L) for i, L in dd.Lam.items()}}
            if n >= pair.s + 1:
                N1, N2 = compress_ddr(pair, basis, n)
                entry["N1"], entry["N2"] = polymatrix_json(N1), polymatrix_json(N2)
            out[str(n)] = entry
        doc["ddr"] = out
    return doc, EXIT_OK


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wopskit", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"wopskit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--degree", type=int, help="override max_degree")
        p.add_argument("--mode", choices=("verify", "explore"), help="override mode")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("-v", "--verbose", action="store_true")

    common(sub.add_parser("classify", help="class number, det condition and weak Pearson residuals"))
    common(sub.add_parser("verify", help="run every identity, band and cross check"))
    exp = sub.add_parser("export", help="emit computed objects as JSON")
    exp.add_argument("what", help="|".join(EXPORT_SELECTORS))
    common(exp)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config, args.degree, args.mode)
        if args.command == "classify":
            doc, code = cmd_classify(cfg)
        elif args.command == "verify":
            doc, code = cmd_verify(cfg)
        else:
            doc, code = cmd_export(cfg, args.what)
    except ConfigError as exc:
        print(f"wopskit: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotQuasiDefinite as exc:
        doc = {"command": args.command, "status": "fail",
               "violations": [{"check": "quasi_definite", "message": f"NotQuasiDefinite({exc.degree})"}]}
        code = EXIT_VIOLATION
    except WopsError as exc:
        doc = {"command": args.command, "status": "fail",
               "violations": [{"check": args.command, "message": f"{type(exc).__name__}: {exc}"}]}
        code = EXIT_VIOLATION

    text = dump(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    log.debug("exit code %d", code)
    return code


if __name__ == "__main__":
    sys.exit(main())
