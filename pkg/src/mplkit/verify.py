"""Seeded randomized numerical verification of identities.

Residuals are measured relative to the evaluated L1 mass of the identity,
because generated identities carry coefficients that grow like powers of
the weight and would otherwise demand absolute accuracy beyond the double
format.  Sampling is deterministic from the plan seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .numeval import DEFAULT_RHO_MAX
from .symalg import Identity, eval_expr_batch

__all__ = [
    "ConvergenceViolation",
    "PointRecord",
    "VerificationPlan",
    "VerificationReport",
    "check_convergence",
    "sample_points",
    "verify_identity",
]

MIN_MODULUS = 0.05  # sampled values stay away from degenerate smallness


class ConvergenceViolation(ValueError):
    """A factor's suffix product cannot be bounded below 1 on the sample
    domain, so series evaluation would not be certified."""


@dataclass(frozen=True)
class VerificationPlan:
    seed: int = 42
    point_count: int = 20
    radius: float = 0.7
    tolerance: float = 1e-9
    allow_complex: bool = True

    def __post_init__(self) -> None:
        if not 0.0 < self.radius < 1.0:
            raise ValueError("radius must lie in (0, 1)")
        if self.point_count < 1:
            raise ValueError("point_count must be positive")
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")


@dataclass(frozen=True)
class PointRecord:
    assignment: dict[str, complex]
    lhs: complex
    rhs: complex
    residual: float
    l1_mass: float
    relative_residual: float


@dataclass(frozen=True)
class VerificationReport:
    plan: VerificationPlan
    points: tuple[PointRecord, ...]
    max_relative_residual: float
    passed: bool


def sample_points(
    plan: VerificationPlan, variables: Sequence[str] | frozenset[str]
) -> list[dict[str, complex]]:
    """Deterministic sample: each variable uniform in the disc (or interval)
    of the plan radius, rejecting moduli below MIN_MODULUS."""
    rng = random.Random(plan.seed)
    names = sorted(variables)
    points = []
    for _ in range(plan.point_count):
        assignment: dict[str, complex] = {}
        for name in names:
            while True:
                re = rng.uniform(-plan.radius, plan.radius)
                im = rng.uniform(-plan.radius, plan.radius) if plan.allow_complex else 0.0
                v = complex(re, im)
                if MIN_MODULUS <= abs(v) <= plan.radius:
                    break
            assignment[name] = v
        points.append(assignment)
    return points


def check_convergence(
    identity: Identity, radius: float, rho_max: float = DEFAULT_RHO_MAX
) -> None:
    """Structural pre-check of the suffix-product condition over the sample
    polydisc |v| <= radius.

    Every suffix product of every factor must be a monomial with nonnegative
    exponents and positive total degree; its supremum over the polydisc is
    then radius**degree, which must stay below rho_max.
    """
    for side_name, side in (("lhs", identity.lhs), ("rhs", identity.rhs)):
        for term in side.terms:
            for factor in term.factors:
                suffix: dict[str, Fraction] = {}
                for k in range(factor.depth, 0, -1):
                    for v, e in factor.args[k - 1].exponents:
                        suffix[v] = suffix.get(v, Fraction(0)) + e
                    negative = [v for v, e in suffix.items() if e < 0]
                    total = sum(suffix.values(), Fraction(0))
                    if negative:
                        raise ConvergenceViolation(
                            f"{side_name} factor {factor}: suffix product from "
                            f"slot {k} has negative exponent in {negative}"
                        )
                    if total == 0:
                        raise ConvergenceViolation(
                            f"{side_name} factor {factor}: suffix product from "
                            f"slot {k} has modulus 1"
                        )
                    if radius ** float(total) > rho_max:
                        raise ConvergenceViolation(
                            f"{side_name} factor {factor}: suffix product from "
                            f"slot {k} reaches {radius ** float(total):.4g} "
                            f"> rho_max = {rho_max} on the radius-{radius} disc"
                        )


def verify_identity(
    identity: Identity,
    plan: VerificationPlan,
    *,
    rho_max: float = DEFAULT_RHO_MAX,
) -> VerificationReport:
    """Evaluate lhs - rhs at the plan's sample points.

    relative residual = |lhs - rhs| / max(1, l1 mass of both sides); the
    evaluation truncation budget is tolerance / 10 per side so certified
    truncation error never dominates the stated tolerance.
    """
    check_convergence(identity, plan.radius, rho_max)
    points = sample_points(plan, identity.variables)
    eval_target = plan.tolerance / 10.0
    lhs_vals, lhs_mass = eval_expr_batch(
        identity.lhs, points, eval_target, rho_max=rho_max
    )
    rhs_vals, rhs_mass = eval_expr_batch(
        identity.rhs, points, eval_target, rho_max=rho_max
    )
    records = []
    max_rel = 0.0
    for i, assignment in enumerate(points):
        lv, rv = complex(lhs_vals[i]), complex(rhs_vals[i])
        mass = float(lhs_mass[i] + rhs_mass[i])
        residual = abs(lv - rv)
        rel = residual / max(1.0, mass)
        max_rel = max(max_rel, rel)
        records.append(
            PointRecord(dict(assignment), lv, rv, residual, mass, rel)
        )
    return VerificationReport(
        plan=plan,
        points=tuple(records),
        max_relative_residual=max_rel,
        passed=max_rel <= plan.tolerance,
    )
