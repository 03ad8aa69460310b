"""Constructive reduction of depth-2 polylogarithms to Li_{n-1,1} and Li_n.

The route: for parameters (alpha, beta) with gamma = alpha + beta, the
triple root sum over X^alpha = x, Y^beta = y, Z^gamma = xy of weighted
Li_{n-1,1} factors equals the weighted depth-2 sum

    sum_{k+l=n} Li_{k,l}(y, x) (-alpha)^{k-1} beta^{l-1}

plus a classical term (beta^{n-1}/gamma) Li_n(xy).  Running alpha = i,
beta = n - i for i = 1..n-1 produces n-1 such probe combinations; the
coefficient matrix ((-i)^{k-1} (n-i)^{n-k-1}) is of Vandermonde type and
is inverted exactly, which isolates each individual Li_{k,l}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .linalg import SingularMatrix
from .symalg import (
    ArgMonomial,
    Expr,
    Identity,
    li_expr,
    li_factor,
    rename_variables,
)

__all__ = [
    "ReductionMatrix",
    "SingularMatrix",
    "WeightTooSmall",
    "WeightedDepthTwoSum",
    "build_reduction_matrix",
    "build_weighted_sum",
    "coefficient_identity",
    "reduce_li",
    "weight4_fixture_identity",
]


class WeightTooSmall(ValueError):
    """The reduction needs total weight at least 3."""


def _mono(exps: dict[str, Fraction], phase: Fraction = Fraction(0)) -> ArgMonomial:
    return ArgMonomial(phase, tuple(exps.items()))


def _triple_root_sum(n: int, alpha: int, beta: int) -> Expr:
    """Weighted Li_{n-1,1} sum over all root triples (X, Y, Z).

    X runs over the alpha-th roots of x, Y over the beta-th roots of y and
    Z over the gamma-th roots of xy; terms independent of one root variable
    pick up its count as a multiplicity.
    """
    gamma = alpha + beta
    c_xy = Fraction((alpha * beta) ** (n - 2), gamma)
    c_zy = -Fraction((gamma * beta) ** (n - 2), alpha)
    c_zx = Fraction((-gamma * alpha) ** (n - 2), beta)
    ea, eb, eg = Fraction(1, alpha), Fraction(1, beta), Fraction(1, gamma)
    top = [n - 1, 1]
    acc = Expr.zero()
    for i in range(alpha):
        for j in range(beta):
            for k in range(gamma):
                pa, pb, pg = Fraction(i, alpha), Fraction(j, beta), Fraction(k, gamma)
                x_over_y = _mono({"x": ea, "y": -eb}, pa - pb)
                z_over_y = _mono({"x": eg, "y": eg - eb}, pg - pb)
                z_over_x = _mono({"x": eg - ea, "y": eg}, pg - pa)
                y_root = _mono({"y": eb}, pb)
                x_root = _mono({"x": ea}, pa)
                acc = acc + li_expr(top, [x_over_y, y_root], c_xy)
                acc = acc + li_expr(top, [z_over_y, y_root], c_zy)
                acc = acc + li_expr(top, [z_over_x, x_root], c_zx)
    return acc


def _depth2_probe(n: int, alpha: int, beta: int) -> Expr:
    """sum_{k+l=n, k,l>0} Li_{k,l}(y, x) (-alpha)^{k-1} beta^{l-1}."""
    y = ArgMonomial.variable("y")
    x = ArgMonomial.variable("x")
    acc = Expr.zero()
    for k in range(1, n):
        l = n - k
        coeff = Fraction((-alpha) ** (k - 1) * beta ** (l - 1))
        acc = acc + li_expr([k, l], [y, x], coeff)
    return acc


def _classical_term(n: int, alpha: int, beta: int) -> Expr:
    xy = _mono({"x": Fraction(1), "y": Fraction(1)})
    return li_expr([n], [xy], Fraction(beta ** (n - 1), alpha + beta))


def coefficient_identity(n: int, alpha: int, beta: int) -> Identity:
    """The weight-n coefficient identity for root parameters (alpha, beta).

    LHS: the triple root sum of Li_{n-1,1} factors.  RHS: the depth-2
    probe combination plus (beta^{n-1}/gamma) Li_n(xy).  All argument
    monomials have exponent denominators dividing lcm(alpha, beta, gamma).
    """
    if n < 3:
        raise WeightTooSmall(f"need weight >= 3, got {n}")
    if alpha < 1 or beta < 1:
        raise ValueError("alpha and beta must be positive integers")
    lhs = _triple_root_sum(n, alpha, beta)
    rhs = _depth2_probe(n, alpha, beta) + _classical_term(n, alpha, beta)
    return Identity(
        lhs,
        rhs,
        weight=n,
        variables=frozenset({"x", "y"}),
        provenance=(
            f"coefficient identity at weight {n}, parameters "
            f"alpha={alpha}, beta={beta}, gamma={alpha + beta}"
        ),
    )


@dataclass(frozen=True)
class WeightedDepthTwoSum:
    """One probe combination together with its two equivalent forms.

    depth2_form is the defining weighted sum of Li_{k,l}(y, x); reduced_form
    carries only Li_{n-1,1} and Li_n factors and equals it as a function.
    """

    n: int
    alpha: int
    beta: int
    depth2_form: Expr
    reduced_form: Expr


def build_weighted_sum(n: int, alpha: int, beta: int) -> WeightedDepthTwoSum:
    if n < 3:
        raise WeightTooSmall(f"need weight >= 3, got {n}")
    reduced = _triple_root_sum(n, alpha, beta) - _classical_term(n, alpha, beta)
    return WeightedDepthTwoSum(
        n, alpha, beta, _depth2_probe(n, alpha, beta), reduced
    )


@dataclass(frozen=True)
class ReductionMatrix:
    """Probe coefficient matrix M[i][k] = (-i)^{k-1} (n-i)^{n-k-1} and its
    exact inverse (both (n-1) x (n-1), i, k = 1..n-1)."""

    n: int
    entries: tuple[tuple[Fraction, ...], ...]
    inverse: tuple[tuple[Fraction, ...], ...]


def build_reduction_matrix(n: int) -> ReductionMatrix:
    if n < 3:
        raise WeightTooSmall(f"need weight >= 3, got {n}")
    entries = [
        [Fraction((-i) ** (k - 1) * (n - i) ** (n - k - 1)) for k in range(1, n)]
        for i in range(1, n)
    ]
    inverse = linalg.invert_exact(entries)
    return ReductionMatrix(
        n,
        tuple(tuple(row) for row in entries),
        tuple(tuple(row) for row in inverse),
    )


def reduce_li(k: int, l: int) -> Identity:
    """Identity expressing Li_{k,l}(x, y) through Li_{n-1,1} and Li_n only.

    Each probe i = 1..n-1 is substituted by its reduced form and the row of
    the inverse probe matrix belonging to index k recombines them.  The probe
    definition carries arguments (y, x); the final identity renames the
    variables so the left side reads Li_{k,l}(x, y).
    """
    n = k + l
    if k < 1 or l < 1:
        raise ValueError("indices must be positive")
    if n < 3:
        raise WeightTooSmall(f"need weight >= 3, got {n}")
    mat = build_reduction_matrix(n)
    combo = Expr.zero()
    for i in range(1, n):
        c = mat.inverse[k - 1][i - 1]
        if c == 0:
            continue
        combo = combo + build_weighted_sum(n, i, n - i).reduced_form.scale(c)
    rhs = rename_variables(combo, {"x": "y", "y": "x"})
    lhs = li_expr([k, l], [ArgMonomial.variable("x"), ArgMonomial.variable("y")])
    return Identity(
        lhs,
        rhs,
        weight=n,
        variables=frozenset({"x", "y"}),
        provenance=(
            f"reduction of Li_({k},{l}) via the inverse probe matrix at weight {n}; "
            "probes are defined with arguments (y, x) and the emitted identity "
            "swaps the variable names back to (x, y)"
        ),
    )


def weight4_fixture_identity() -> Identity:
    """The hand-checked weight-4 reduction of Li_{2,2}(x, y) to Li_{3,1} terms.

    Serves as the regression fixture for the whole pipeline; the generated
    weight-4 identity need not match it term by term, but both must verify
    numerically.
    """
    half = Fraction(1, 2)
    one = Fraction(1)
    x = ArgMonomial.variable("x")
    y = ArgMonomial.variable("y")
    sqrt_ratio_xy = _mono({"x": half, "y": -half})            # sqrt(x)/sqrt(y)
    neg_sqrt_ratio_xy = _mono({"x": half, "y": -half}, half)  # -sqrt(x)/sqrt(y)
    sqrt_ratio_yx = _mono({"y": half, "x": -half})
    neg_sqrt_ratio_yx = _mono({"y": half, "x": -half}, half)
    y_over_x = _mono({"y": one, "x": -one})
    xy = _mono({"x": one, "y": one})

    rhs = (
        li_expr([3, 1], [neg_sqrt_ratio_xy, y], -4)
        + li_expr([3, 1], [sqrt_ratio_xy, y], -4)
        + li_expr([3, 1], [neg_sqrt_ratio_yx, x], 4)
        + li_expr([3, 1], [sqrt_ratio_yx, x], 4)
        + li_expr([3, 1], [x, y], 1)
        + li_expr([3, 1], [y, x], -1)
        + li_expr([3, 1], [y_over_x, x], -1)
        + li_expr([4], [xy], Fraction(-1, 2))
        + Expr.single(1, [li_factor([1], [x]), li_factor([3], [y])])
    )
    lhs = li_expr([2, 2], [x, y])
    return Identity(
        lhs,
        rhs,
        weight=4,
        variables=frozenset({"x", "y"}),
        provenance="weight-4 depth-2 reference identity (regression fixture)",
    )
