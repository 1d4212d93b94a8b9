"""Command line runner for the verification suites.

Each suite replays a family of exact checks and emits one PASS/FAIL record
per check.  Reports are deterministic: no timestamps, stable ordering, and a
per-suite random stream seeded from --seed, so two runs with the same
arguments produce byte-identical output.

    chevkern relations --system C2 --trunc 4
    chevkern symbols --prime 5 --samples 50
    chevkern derivations --input cusp.txt --format json
    chevkern all --seed 42
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import zlib
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chevalley import (
    build_model,
    congruence_dimension,
    levi_decompose,
    load_structure_constants,
    ordered_root_pairs,
    perfectness_witness,
    verify_additivity,
    verify_commutator,
)
from .derivations import (
    apply_derivation,
    der_dim,
    extend_point,
    localize,
    number_ring_rigidity,
    parse_problem,
    smoothness_scan,
)
from .extensions import (
    CocycleExtension,
    FinDimAlgebra,
    GroupOps,
    HeisenbergLikeGroup,
    IdempotentLiftingError,
    TracelessMatrices,
    commutator_lift_invariance,
    decompose_algebra,
    killing_form,
    product_splitting,
    reassemble,
    splitness_verdict,
)
from .kernel import Matrix, MultiPoly, NotAUnitError
from .rings import TruncAlgebra, factor_one_minus_ux, unit_group_witness
from .rootsys import UnsupportedRootSystemError
from .steinberg import (
    NONSYMPLECTIC_RELATIONS,
    SYMPLECTIC_RELATIONS,
    TameSymbol,
    check_symbol_relations,
    derived_symbol_identities,
    symbol_is_central_kernel,
)

SUITES = ("relations", "symbols", "units", "filtration", "extensions",
          "derivations", "all")

DEFAULT_PROBLEM = """\
base rational
vars X Y
rel X^3 - Y^2
point X=0 Y=0
point X=1 Y=1
point X=4 Y=8
"""


def _plain(value):
    """Coerce detail values into deterministic JSON-friendly data."""
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in sorted(value.items(), key=lambda kv: str(kv[0]))}
    return str(value)


class Report:
    def __init__(self, suite: str, config: dict):
        self.suite = suite
        self.config = dict(config)
        self.records = []

    def add(self, name: str, ok: bool, **detail):
        self.records.append({
            "name": name,
            "status": "PASS" if ok else "FAIL",
            "detail": {k: _plain(v) for k, v in sorted(detail.items())},
        })

    @property
    def failed(self) -> int:
        return sum(1 for r in self.records if r["status"] == "FAIL")

    def payload(self) -> dict:
        return {
            "version": __version__,
            "suite": self.suite,
            "config": self.config,
            "records": self.records,
            "summary": {"total": len(self.records), "failed": self.failed},
        }

    def to_json(self) -> str:
        return json.dumps(self.payload(), sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"

    def to_text(self) -> str:
        lines = ["suite %s (version %s)" % (self.suite, __version__),
                 "config: " + " ".join("%s=%s" % (k, v)
                                       for k, v in sorted(self.config.items()))]
        for r in self.records:
            detail = "; ".join("%s=%s" % (k, v) for k, v in r["detail"].items())
            line = "%s %s" % (r["status"], r["name"])
            if detail:
                line += " | " + detail
            lines.append(line)
        lines.append("summary: %d checks, %d failed" % (len(self.records), self.failed))
        return "\n".join(lines) + "\n"


def _suite_rng(seed: int, suite: str) -> random.Random:
    return random.Random(seed ^ zlib.crc32(suite.encode("utf-8")))


def _rat(rng, lo=-9, hi=9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 9))


def _nonzero_rat(rng) -> Fraction:
    q = _rat(rng)
    while q == 0:
        q = _rat(rng)
    return q


def _trunc_elem(algebra: TruncAlgebra, rng, unit=False):
    coeffs = [_rat(rng) for _ in range(algebra.d)]
    if unit:
        while coeffs[0] == 0:
            coeffs[0] = _rat(rng)
    return algebra.element(coeffs)


def _root_name(root) -> str:
    return "(" + ",".join(str(c) for c in root.coords) + ")"


# ---------------------------------------------------------------------------
# suites

def run_relations(report: Report, cfg, rng):
    model = build_model(cfg.system)
    constants = load_structure_constants(model.system.kind)
    s, t = MultiPoly.variables_in("s", "t")
    algebra = TruncAlgebra(cfg.trunc)
    for alpha, beta in ordered_root_pairs(model.system):
        chk = verify_commutator(model, alpha, beta, s, t, constants)
        report.add("commutator %s [%s, %s] formal" %
                   (model.system.kind, _root_name(alpha), _root_name(beta)),
                   chk.ok,
                   constants=["N(%d,%d)=%d" % u for u in chk.used])
        st = _trunc_elem(algebra, rng)
        tt = _trunc_elem(algebra, rng)
        chk2 = verify_commutator(model, alpha, beta, st, tt, constants)
        report.add("commutator %s [%s, %s] mod e^%d" %
                   (model.system.kind, _root_name(alpha), _root_name(beta), cfg.trunc),
                   chk2.ok, s=str(st), t=str(tt))
    k = max(3, cfg.samples // 5)
    for alpha in model.system.roots:
        ok = all(verify_additivity(model, alpha, _rat(rng), _rat(rng))
                 for _ in range(k))
        ok = ok and all(
            verify_additivity(model, alpha, _trunc_elem(algebra, rng),
                              _trunc_elem(algebra, rng))
            for _ in range(3))
        report.add("one-parameter additivity %s %s" %
                   (model.system.kind, _root_name(alpha)), ok, samples=k + 3)


def run_symbols(report: Report, cfg, rng):
    model = build_model(cfg.system)
    algebra = TruncAlgebra(cfg.trunc)
    k = max(3, cfg.samples // 5)
    for alpha in model.system.roots:
        ok = True
        for _ in range(k):
            chk = symbol_is_central_kernel(model, alpha,
                                           _nonzero_rat(rng), _nonzero_rat(rng))
            ok = ok and chk.ok
        for _ in range(3):
            chk = symbol_is_central_kernel(model, alpha,
                                           _trunc_elem(algebra, rng, unit=True),
                                           _trunc_elem(algebra, rng, unit=True))
            ok = ok and chk.ok
        report.add("symbol word collapses %s %s" %
                   (model.system.kind, _root_name(alpha)), ok, samples=k + 3)
    symbol = TameSymbol(cfg.prime)
    names = (SYMPLECTIC_RELATIONS if model.system.family == "C"
             else NONSYMPLECTIC_RELATIONS)
    report.add("relation set for %s" % model.system.kind, True,
               relations=list(names))
    for rec in check_symbol_relations(symbol, names, samples=cfg.samples,
                                      seed=cfg.seed):
        report.add("tame symbol p=%d relation %s" % (cfg.prime, rec.name),
                   rec.ok, checked=rec.checked,
                   failures=[str(f) for f in rec.failures[:3]])
    for rec in derived_symbol_identities(symbol, samples=cfg.samples,
                                         seed=cfg.seed):
        report.add("tame symbol p=%d derived %s" % (cfg.prime, rec.name),
                   rec.ok, checked=rec.checked,
                   failures=[str(f) for f in rec.failures[:3]])


def run_units(report: Report, cfg, rng):
    algebra = TruncAlgebra(cfg.trunc)
    d = cfg.trunc
    ok = True
    checked = 0
    for _ in range(cfg.samples):
        x = _trunc_elem(algebra, rng)
        is_unit = x.is_unit()
        if is_unit:
            good = (x * x.inverse()) == algebra.one()
        else:
            try:
                x.inverse()
                good = False
            except Exception:
                good = True
        ok = ok and good and (is_unit == (x.coeff(0) != 0))
        checked += 1
    report.add("unit criterion and inverses mod e^%d" % d, ok, checked=checked)

    ok = True
    produced = 0
    for _ in range(cfg.samples):
        x = _trunc_elem(algebra, rng, unit=True)
        while x.coeff(1) == 0:
            x = _trunc_elem(algebra, rng, unit=True)
        target = algebra.one() + algebra.eps(1) * _trunc_elem(algebra, rng)
        try:
            unit_group_witness(x, target)  # self-checks by re-expansion
        except ArithmeticError:
            ok = False
            continue
        produced += 1
    report.add("unit group witnesses mod e^%d" % d, ok, produced=produced)

    ok = True
    factored = 0
    skipped = 0
    for _ in range(cfg.samples):
        u = _nonzero_rat(rng)
        x = _trunc_elem(algebra, rng)
        try:
            fact = factor_one_minus_ux(u, x)
        except NotAUnitError:
            skipped += 1
            continue
        ok = ok and (algebra.one() - x * u == fact.unit * fact.scalar)
        factored += 1
    report.add("one-minus factorization mod e^%d" % d, ok,
               factored=factored, skipped=skipped)


def run_filtration(report: Report, cfg, rng):
    model = build_model(cfg.system)
    fr = congruence_dimension(model, cfg.trunc)
    for level, dim in enumerate(fr.per_level, start=1):
        report.add("congruence level %d of %s mod e^%d" %
                   (level, model.system.kind, cfg.trunc),
                   dim == fr.lie_dim, dim=dim, expected=fr.lie_dim)
    report.add("congruence total %s mod e^%d" % (model.system.kind, cfg.trunc),
               fr.total == fr.expected_total,
               total=fr.total, expected=fr.expected_total)

    algebra = TruncAlgebra(cfg.trunc)
    ok = True
    for _ in range(max(3, cfg.samples // 5)):
        g = model.identity(like=algebra.one())
        for _ in range(3):
            alpha = rng.choice(model.system.roots)
            g = g * model.e(alpha, _trunc_elem(algebra, rng))
        g0, c = levi_decompose(g)
        embedded = Matrix(g0.matrix.nrows, g0.matrix.ncols,
                          tuple(algebra.element([x]) for x in g0.matrix.entries))
        ok = ok and (embedded * c.matrix == g.matrix)
        ok = ok and model.check_membership(g0)
    report.add("constant-term splitting %s" % model.system.kind, ok)

    ok = True
    for alpha in model.system.roots:
        r = _nonzero_rat(rng)
        ok = ok and perfectness_witness(model, alpha, r).ok
    report.add("root elements are commutators %s" % model.system.kind, ok,
               scaling="s=2")


def run_extensions(report: Report, cfg, rng):
    lie = TracelessMatrices(2)
    n = lie.n
    ok = True
    for _ in range(max(3, cfg.samples // 5)):
        x = lie.random_element(rng)
        y = lie.random_element(rng)
        ok = ok and (killing_form(lie, x, y) == 2 * n * (x * y).trace())
    report.add("pairing equals scaled trace form", ok)

    verdict = splitness_verdict(HeisenbergLikeGroup(lie))
    central = verdict.witness[2] if verdict.witness else None
    report.add("twisted product detected", verdict.status == "NON_SPLIT",
               status=verdict.status, central_witness=central)
    verdict0 = splitness_verdict(HeisenbergLikeGroup(lie, form=lambda a, b: Fraction(0)))
    report.add("zero pairing splits", verdict0.status == "SPLIT",
               status=verdict0.status, section_checked=verdict0.section_checked)

    zero = Matrix.zero(2, 2)
    ops = GroupOps(mul=lambda g, h: g + h, inv=lambda g: -g, identity=zero)
    cocycle = lambda g, h: (g.entry(0, 0) * h.entry(1, 1)
                            - g.entry(0, 1) * h.entry(1, 0),)
    ext = CocycleExtension(ops, cocycle)
    g = Matrix.from_rows([[1, 2], [0, -1]])
    h = Matrix.from_rows([[0, 1], [3, 1]])
    shifts = [(Fraction(0),), (Fraction(2),), (Fraction(-1, 2),)]
    inv = commutator_lift_invariance(ext, g, h, shifts)
    report.add("commutator independent of lifts", inv.ok,
               center=inv.commutator_center, checked=inv.checked)

    pair_ops = GroupOps(mul=lambda x, y: (x[0] + y[0], x[1] + y[1]),
                        inv=lambda x: (-x[0], -x[1]),
                        identity=(Fraction(0), Fraction(0)))
    s1 = [(Fraction(a), Fraction(0)) for a in range(-2, 3)]
    s2 = [(Fraction(0), Fraction(b)) for b in range(-2, 3)]
    ext_obs = CocycleExtension(pair_ops, lambda x, y: (x[0] * y[1],))
    rep = product_splitting(ext_obs, ext_obs.element, ext_obs.element, s1, s2)
    report.add("obstruction blocks merged section",
               (not rep.split) and bool(rep.psi_additive_ok),
               witness=rep.witness[2] if rep.witness else None)
    ext_ok = CocycleExtension(pair_ops, lambda x, y: (x[0] * y[1] + x[1] * y[0],))
    rep2 = product_splitting(ext_ok, ext_ok.element, ext_ok.element, s1, s2)
    report.add("sections merge when obstruction vanishes", rep2.split,
               section_checked=rep2.section_checked)

    if cfg.input:
        algebras = [("input", FinDimAlgebra.load(cfg.input))]
    else:
        algebras = [
            ("split quadratic", FinDimAlgebra.from_univariate_quotient([0, -1, 1])),
            ("mixed quartic", FinDimAlgebra.from_univariate_quotient([0, 0, 0, -1, 1])),
            ("pure truncation", FinDimAlgebra.truncated(cfg.trunc)),
            ("two nilpotent generators", FinDimAlgebra.two_generator_square_zero()),
        ]
    for label, algebra in algebras:
        try:
            decomposition = decompose_algebra(algebra)
        except IdempotentLiftingError as exc:
            report.add("decomposition of %s" % label, True,
                       verdict="irrational residue field", message=str(exc))
            continue
        detail = {
            "radical_dim": decomposition.radical_dim,
            "factors": decomposition.describe(),
        }
        if decomposition.all_principal:
            check = reassemble(decomposition)
            report.add("decomposition of %s" % label, check.ok,
                       reassembled=str(check.sum_algebra), **detail)
        else:
            report.add("decomposition of %s" % label, True,
                       verdict="maximal ideal not principal", **detail)


def run_derivations(report: Report, cfg, rng):
    text = Path(cfg.input).read_text() if cfg.input else DEFAULT_PROBLEM
    algebra, points = parse_problem(text)
    if not points:
        report.add("problem has points", False)
        return
    dims = []
    for point in points:
        rep = der_dim(algebra, point, mode="relative")
        ok = len(rep.tangent_basis) == rep.dim
        for tangent in rep.tangent_basis:
            for f in algebra.relations:
                val = apply_derivation(algebra, point, tangent, f)
                nonzero = val != 0 if isinstance(val, Fraction) else not val.is_zero()
                ok = ok and not nonzero
        dims.append(rep.dim)
        pname = " ".join("%s=%s" % (k, point[k]) for k in sorted(point))
        report.add("derivations at %s" % (pname or "the base point"), ok,
                   dim=rep.dim, mode="relative")
        if algebra.field is not None:
            rep_abs = der_dim(algebra, point, mode="absolute")
            report.add("absolute derivations at %s" % (pname or "the base point"),
                       len(rep_abs.tangent_basis) == rep_abs.dim,
                       dim=rep_abs.dim, mode="absolute")
    scan = smoothness_scan(algebra, points)
    verdict = ("dimension jump at %d point(s)" % len(scan.flagged)
               if scan.flagged else "uniform")
    report.add("smoothness scan", True, min_dim=scan.min_dim,
               flagged=len(scan.flagged), verdict=verdict)

    if algebra.base.kind == "numberring":
        rig = number_ring_rigidity(algebra.base)
        report.add("number ring rigidity", rig.absolute_dim in (0, 1),
                   rigid=rig.rigid, derivative=str(rig.derivative_value))

    if algebra.variables:
        hvar = algebra.variables[0]
        h = MultiPoly.variable(hvar)
        loc = localize(algebra, h)
        checked = 0
        skipped = 0
        ok = True
        for point in points:
            try:
                lifted = extend_point(algebra, h, point)
            except ValueError:
                skipped += 1
                continue
            ok = ok and (der_dim(loc, lifted).dim == der_dim(algebra, point).dim)
            checked += 1
        report.add("localization keeps dimensions (inverting %s)" % hvar, ok,
                   checked=checked, skipped=skipped)


SUITE_RUNNERS = {
    "relations": run_relations,
    "symbols": run_symbols,
    "units": run_units,
    "filtration": run_filtration,
    "extensions": run_extensions,
    "derivations": run_derivations,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chevkern",
        description="Exact verification suites for Chevalley group kernels "
                    "and related structures.")
    parser.add_argument("suite", choices=SUITES)
    parser.add_argument("--system", default="A2",
                        help="root system label, e.g. A2, A3, C2 (default A2)")
    parser.add_argument("--trunc", type=int, default=4, metavar="D",
                        help="truncation order for K[e]/(e^D) checks (default 4)")
    parser.add_argument("--prime", type=int, default=5,
                        help="prime for the tame symbol (default 5)")
    parser.add_argument("--samples", type=int, default=25,
                        help="random samples per family (default 25)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for all random streams (default 0)")
    parser.add_argument("--input", default=None, metavar="PATH",
                        help="problem or algebra file for the derivations and "
                             "extensions suites")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--output", default=None, metavar="PATH",
                        help="write the report here instead of stdout")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    cfg = parser.parse_args(argv)
    if cfg.trunc < 2:
        parser.error("--trunc must be at least 2")
    if cfg.samples < 1:
        parser.error("--samples must be positive")
    if cfg.suite == "all" and cfg.input:
        parser.error("--input only applies to a single suite")

    suites = list(SUITE_RUNNERS) if cfg.suite == "all" else [cfg.suite]
    config = {"system": cfg.system, "trunc": cfg.trunc, "prime": cfg.prime,
              "samples": cfg.samples, "seed": cfg.seed,
              "input": cfg.input or ""}
    report = Report(cfg.suite, config)
    try:
        for suite in suites:
            SUITE_RUNNERS[suite](report, cfg, _suite_rng(cfg.seed, suite))
    except UnsupportedRootSystemError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2

    out = report.to_json() if cfg.format == "json" else report.to_text()
    if cfg.output:
        Path(cfg.output).write_text(out)
    else:
        sys.stdout.write(out)
    return 0 if report.failed == 0 else 1


if __name__ == "__main__":
    sys.exit(main())
