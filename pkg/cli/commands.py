"""
Command handlers.

Each handler turns parsed arguments into a CommandResult holding the text report and the JSON
document for the same run. Handlers never print; the entry point decides which form to emit.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List

from core.algebra import is_isomorphic_fp
from core.bondal_thomsen import (
    ThetaCollection,
    emit_strata_svg,
    is_bondal_ruan_type,
    stratify,
    theta_exact,
    theta_sampled,
    transparency_check,
)
from core.config import RunConfig
from core.error_handling import UnsupportedInputError, ValidationError
from core.invariants import (
    DECOMPOSABLE,
    balmer_primes,
    check_k0_multiplicative,
    k0_multiplication_table,
    pic_group_structure_fp,
    projective_points_fp,
    rescale_monoid_hom,
    skyscraper_table,
    skyscraper_tables_equivalent,
    table_is_idempotent_diagonal,
    unit_pic_element,
    verify_balmer_hypotheses,
)
from core.linalg import Field
from core.quiver import (
    WeightQuiver,
    build_algebra_quiver,
    build_toric_quiver,
    comult_is_coassociative,
    comult_is_cocommutative,
    comult_is_counital,
    rep_summary,
    weights_to_text,
)
from core.selftest import run_selftest
from core.sheaves import ec_product, fm_oracle_p1, projective_dimension
from core.toric import cox_grading, line_bundle_cohomology
from core.types import CheckResult, ExitCode, report_to_dict
from core.utils import format_weight

from .loaders import is_algebra_target, load_algebra, load_fan, load_matrix
from .parsing import parse_integers, parse_points, parse_sheaf, parse_weights

K0_PAIRS = 10


@dataclass
class CommandResult:
    """The outcome of one command: a text report and the equivalent JSON document."""

    text: str
    data: Dict[str, Any] = field(default_factory=dict)
    exit_code: ExitCode = ExitCode.OK


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _check_line(check: CheckResult) -> str:
    line = f"{'PASS' if check.passed else 'FAIL'} {check.name}"
    return f"{line}: {check.witness}" if check.witness and not check.passed else line


def _monomial(m) -> str:
    factors = [f"x{k}" if e == 1 else f"x{k}^{e}" for k, e in enumerate(m) if e]
    return "*".join(factors) or "1"


def _point_text(field_: Field, point) -> str:
    return "[" + ",".join(str(field_.to_output(x)) for x in point) + "]"


class CommandController:
    """Runs the subcommands against one validated RunConfig."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.field = Field(config.prime)
        self.handlers: Dict[str, Callable[[Any], CommandResult]] = {
            "theta": self.theta,
            "check-br": self.check_br,
            "transparency": self.transparency,
            "cohomology": self.cohomology,
            "stratify": self.stratify,
            "quiver": self.quiver,
            "convolve": self.convolve,
            "invariants": self.invariants,
            "sky-table": self.sky_table,
            "pic-count": self.pic_count,
            "rescale": self.rescale,
            "selftest": self.selftest,
        }

    def run(self, command: str, args) -> CommandResult:
        handler = self.handlers.get(command)
        if handler is None:
            raise ValidationError(f"unknown command '{command}'")
        logging.info(f"Running {command} over {self.field.name}")
        return handler(args)

    # --- Toric commands ---

    def theta(self, args) -> CommandResult:
        g = cox_grading(load_fan(args.fan))
        denominator = None
        if args.sampled is not None:
            denominator = args.sampled or self.config.sampled_denominator
            collection = ThetaCollection(theta_sampled(g, denominator), 1)
        else:
            collection = theta_exact(g)
        collection = collection.calibrated(args.sign)
        weights = collection.sorted_weights()
        return CommandResult(
            weights_to_text(weights),
            {
                "fan": args.fan,
                "method": f"sampled:{denominator}" if denominator else "exact",
                "convention_sign": collection.convention_sign,
                "weights": [list(w) for w in weights],
            },
        )

    def check_br(self, args) -> CommandResult:
        report = is_bondal_ruan_type(load_fan(args.fan))
        lines = ["true" if report.bondal_ruan else "false"]
        for sign, r in sorted(report.reports.items(), reverse=True):
            lines.append(f"sign {sign:+d}: {weights_to_text(r.weights)} {r.verdict}")
            for check in (r.strong_exceptional, r.hom_equality, r.cardinality):
                if not check.passed:
                    lines.append(f"  {_check_line(check)}")
        data = {
            "fan": args.fan,
            "bondal_ruan": report.bondal_ruan,
            "reports": {f"{sign:+d}": report_to_dict(r) for sign, r in report.reports.items()},
        }
        return CommandResult("\n".join(lines), data)

    def transparency(self, args) -> CommandResult:
        report = transparency_check(load_fan(args.fan), parse_weights(args.weights))
        checks = (report.strong_exceptional, report.hom_equality, report.cardinality)
        lines = [_check_line(c) for c in checks] + [report.verdict]
        return CommandResult("\n".join(lines), {"fan": args.fan, **report_to_dict(report)})

    def cohomology(self, args) -> CommandResult:
        divisor = parse_integers(args.divisor)
        dims = line_bundle_cohomology(load_fan(args.fan), divisor)
        text = ", ".join(f"H^{p} = {d}" for p, d in sorted(dims.items()))
        data = {"fan": args.fan, "divisor": divisor, "cohomology": {str(p): d for p, d in dims.items()}}
        return CommandResult(text, data)

    def stratify(self, args) -> CommandResult:
        s = stratify(cox_grading(load_fan(args.fan)), geometry=not args.weights_only)
        lines = []
        strata = []
        for label in s.labels:
            chambers = s.strata[label]
            volume = sum((c.volume for c in chambers), Fraction(0))
            if s.geometry:
                lines.append(f"{format_weight(label)}: {len(chambers)} faces, volume {volume}")
            else:
                lines.append(format_weight(label))
            strata.append({"label": list(label), "faces": len(chambers), "volume": str(volume)})
        for a, b in sorted(s.order_h0):
            lines.append(f"{format_weight(a)} <= {format_weight(b)}")
        lines.append(f"orders agree: {_yes(s.consistent)}")
        if s.geometry:
            lines.append(f"total volume: {s.total_volume()}")
        if args.svg:
            Path(args.svg).write_text(emit_strata_svg(s), encoding="utf-8")
            logging.info(f"Strata drawing written to {args.svg}")
        data = {
            "fan": args.fan,
            "strata": strata,
            "order_h0": [[list(a), list(b)] for a, b in sorted(s.order_h0)],
            "order_closure": [[list(a), list(b)] for a, b in sorted(s.order_closure)],
            "consistent": s.consistent,
            "violation": s.violation,
            "total_volume": str(s.total_volume()) if s.geometry else None,
        }
        return CommandResult("\n".join(lines), data)

    # --- Quivers and convolution ---

    def _quiver_for(self, target: str, weights: List) -> WeightQuiver:
        if is_algebra_target(target):
            A = load_algebra(target, self.field)
            if any(len(w) != 1 or w[0] < 0 for w in weights):
                raise ValidationError("algebra quivers have vertices 0, 1, 2, ...")
            q = build_algebra_quiver(A, max(w[0] for w in weights) + 1)
            return q.restrict(weights)
        return build_toric_quiver(cox_grading(load_fan(target)), weights, self.field)

    def quiver(self, args) -> CommandResult:
        q = self._quiver_for(args.target, parse_weights(args.weights))
        lines = [f"vertices: {weights_to_text(q.vertices)}"]
        homs = []
        for a in q.vertices:
            for b in q.vertices:
                basis = q.hom_basis[(a, b)]
                if a != b and basis:
                    lines.append(f"Hom({format_weight(a)}, {format_weight(b)}): {len(basis)}")
                    homs.append({"source": list(a), "target": list(b), "dim": len(basis)})
        generators = q.generators()
        for a, b, m in generators:
            lines.append(f"arrow {format_weight(a)} -> {format_weight(b)}: {_monomial(m)}")
        flags = {
            "coassociative": comult_is_coassociative(q),
            "counital": comult_is_counital(q),
            "cocommutative": comult_is_cocommutative(q),
        }
        lines.append(", ".join(f"{name} {_yes(flag)}" for name, flag in flags.items()))
        data = {
            "target": args.target,
            "flavor": q.flavor.value,
            "vertices": [list(v) for v in q.vertices],
            "homs": homs,
            "arrows": [{"source": list(a), "target": list(b), "monomial": list(m)} for a, b, m in generators],
            **flags,
        }
        return CommandResult("\n".join(lines), data)

    def _convolution_quiver(self, target: str) -> WeightQuiver:
        if is_algebra_target(target):
            A = load_algebra(target, self.field)
            return build_algebra_quiver(A, A.dim)
        fan = load_fan(target)
        g = cox_grading(fan)
        q = build_toric_quiver(g, [(i,) for i in range(fan.lattice_rank + 1)], self.field)
        projective_dimension(q)
        return q

    def convolve(self, args) -> CommandResult:
        q = self._convolution_quiver(args.target)
        e1, e2 = parse_sheaf(args.left), parse_sheaf(args.right)
        product = ec_product(q, e1, e2)
        cohomology = {k: {str(d): n for d, n in dims.items() if n} for k, dims in rep_summary(product.rep).items()}
        text = product.recognized if product.recognized is not None else f"unrecognized {cohomology}"
        data = {
            "target": args.target,
            "left": e1.render(),
            "right": e2.render(),
            "product": product.recognized,
            "cohomology": cohomology,
        }
        if args.oracle:
            if projective_dimension(q) != 1:
                raise UnsupportedInputError("the geometric oracle covers P^1 only")
            oracle = fm_oracle_p1(e1, e2, self.field)
            expected = {format_weight(v): {str(d): n for d, n in dims.items() if n} for v, dims in oracle.items()}
            agrees = expected == cohomology
            text += f"\noracle: {'agrees' if agrees else 'disagrees'}"
            data["oracle"] = {"cohomology": expected, "agrees": agrees}
        return CommandResult(text, data)

    # --- Algebra invariants ---

    def invariants(self, args) -> CommandResult:
        A = load_algebra(args.algebra, self.field)
        d = A.dim
        q = build_algebra_quiver(A, d)
        rng = random.Random(self.config.seed)
        checks = [
            CheckResult(
                "K0 table is the idempotent diagonal", table_is_idempotent_diagonal(k0_multiplication_table(d))
            ),
            check_k0_multiplicative(q, rng, K0_PAIRS),
            *verify_balmer_hypotheses(d, A.field),
            CheckResult("comultiplication coassociative", comult_is_coassociative(q)),
            CheckResult("comultiplication counital", comult_is_counital(q)),
        ]
        primes = balmer_primes(d)
        unit = unit_pic_element(A)
        lines = [f"algebra {A.name or args.algebra}, dim {d}, over {A.field.name}"]
        lines += [_check_line(c) for c in checks]
        lines.append(f"cocommutative: {_yes(comult_is_cocommutative(q))}")
        lines.append("Balmer primes: " + ", ".join(f"<{', '.join(p.generators)}>" for p in primes))
        lines.append(f"unit in Pic: shift {unit.shift}")
        data = {
            "algebra": A.name or args.algebra,
            "dim": d,
            "field": A.field.name,
            "checks": [report_to_dict(c) for c in checks],
            "cocommutative": comult_is_cocommutative(q),
            "balmer_primes": [{"index": p.index, "generators": list(p.generators)} for p in primes],
            "unit": unit.to_output(A.field),
        }
        if A.field.is_finite:
            summary = pic_group_structure_fp(A)
            lines.append(f"|A^x| = {summary.units}, |Pic| = {summary.order} x Z")
            data["pic"] = {"units": summary.units, "order": summary.order}
        failed = any(not c.passed for c in checks)
        return CommandResult("\n".join(lines), data, ExitCode.COMPUTATION if failed else ExitCode.OK)

    def sky_table(self, args) -> CommandResult:
        A = load_algebra(args.algebra, self.field)
        if args.all_points_fp:
            points = projective_points_fp(A.field, A.dim)
        elif args.points:
            points = parse_points(args.points)
        else:
            points = [A.basis(i) for i in range(A.dim)] + [A.unit]
        table = skyscraper_table(A, points)
        lines = []
        for (i, j), value in sorted(table.entries.items()):
            product = value if value == DECOMPOSABLE else _point_text(A.field, value)
            left, right = _point_text(A.field, table.points[i]), _point_text(A.field, table.points[j])
            lines.append(f"{left} * {right} = {product}")
        data = {"algebra": A.name or args.algebra, **table.to_output()}
        if args.compare:
            B = load_algebra(args.compare, A.field)
            g = skyscraper_tables_equivalent(A, B)
            isomorphism = is_isomorphic_fp(A, B)
            lines.append(f"tables equivalent: {_yes(g is not None)}")
            lines.append(f"algebras isomorphic: {_yes(isomorphism is not None)}")
            data["compare"] = {
                "algebra": B.name or args.compare,
                "equivalent": g is not None,
                "matrix": g.to_output() if g is not None else None,
                "isomorphic": isomorphism is not None,
            }
        return CommandResult("\n".join(lines), data)

    def pic_count(self, args) -> CommandResult:
        prime_field = Field(args.prime)
        A = load_algebra(args.algebra, prime_field)
        if A.field != prime_field:
            A = A.over(prime_field)
        summary = pic_group_structure_fp(A)
        text = f"units: {summary.units}\norder: {summary.order}"
        data = {"algebra": A.name or args.algebra, "prime": args.prime, "units": summary.units, "order": summary.order}
        return CommandResult(text, data)

    def rescale(self, args) -> CommandResult:
        A = load_algebra(args.source, self.field)
        B = load_algebra(args.target, A.field)
        phi = load_matrix(args.matrix, A.field)
        c = rescale_monoid_hom(A, B, phi)
        value = A.field.to_output(c)
        return CommandResult(f"c = {value}", {"from": args.source, "to": args.target, "c": value})

    def selftest(self, args) -> CommandResult:
        results = run_selftest(self.config.seed)
        passed = sum(1 for r in results if r.passed)
        lines = [_check_line(r) for r in results] + [f"{passed}/{len(results)} checks passed"]
        data = {"checks": [report_to_dict(r) for r in results], "passed": passed, "total": len(results)}
        exit_code = ExitCode.OK if passed == len(results) else ExitCode.COMPUTATION
        return CommandResult("\n".join(lines), data, exit_code)
