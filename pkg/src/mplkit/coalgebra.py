"""Depth-graded symbol calculus: iterated images, distribution rewriting,
and the root-sum preimage construction.

A depth-d generator Li_{n-d;1,...,1}(a_1,...,a_d) maps to the sum over all
compositions n_1 + ... + n_d = n with every part >= 2 of the tensor word
Li_{n_1}(a_1) x ... x Li_{n_d}(a_d).  Replacing one slot argument by the sum
of its 2^s-th roots rescales each word by 2^{-s(m-1)} in that slot's weight
m, so an exact Vandermonde solve in the nodes 2^{-(m-1)} isolates any single
target word, slot by slot from the last one down.

Symbols span a free module; distribution relations are applied only through
explicit rewriting, never as an implicit quotient, so equality stays
decidable.  All coefficients are exact rationals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import linalg

__all__ = [
    "GeneratorCombination",
    "GeneratorTerm",
    "GroupElement",
    "InfeasibleWeights",
    "PolylogCombination",
    "PolylogSymbol",
    "PreimageReport",
    "RootCapExceeded",
    "TensorElement",
    "cobracket_image",
    "compositions_min2",
    "construct_preimage",
    "distribution_contract",
    "distribution_expand",
    "root_sum_generator",
    "tensor_distribution_contract",
    "verify_preimage",
]

DEFAULT_TERM_CAP = 2**12


class RootCapExceeded(RuntimeError):
    """Cumulative 2-power root expansion grew past the configured cap."""


class InfeasibleWeights(ValueError):
    """A requested tensor word needs every slot weight to be at least 2."""


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class GroupElement:
    """Formal argument zeta * prod a_i^{e_i} over abstract generators.

    Exponent denominators must be powers of 2 (the ground field is assumed
    quadratically closed, so 2-power roots always exist); the root of unity
    is unrestricted so third roots remain available for distribution tests.
    """

    phase: Fraction = Fraction(0)
    exponents: tuple[tuple[str, Fraction], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)
        exps = tuple(
            sorted((str(v), Fraction(e)) for v, e in self.exponents if e != 0)
        )
        for v, e in exps:
            if not _is_power_of_two(e.denominator):
                raise ValueError(
                    f"exponent {e} of {v} has a non-2-power denominator"
                )
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def generator(cls, name: str) -> "GroupElement":
        return cls(Fraction(0), ((name, Fraction(1)),))

    @classmethod
    def make(
        cls,
        exponents: Mapping[str, Fraction | int] | None = None,
        zeta_order: int = 1,
        zeta_power: int = 0,
    ) -> "GroupElement":
        return cls(Fraction(zeta_power, zeta_order), tuple((exponents or {}).items()))

    @property
    def zeta_order(self) -> int:
        return self.phase.denominator

    @property
    def zeta_power(self) -> int:
        return self.phase.numerator

    def power(self, r: int) -> "GroupElement":
        return GroupElement(self.phase * r, tuple((v, e * r) for v, e in self.exponents))

    def roots(self, s: int) -> list["GroupElement"]:
        """All 2^s elements whose 2^s-th power is this element."""
        if s < 0:
            raise ValueError("root level must be nonnegative")
        scale = 2**s
        exps = tuple((v, e / scale) for v, e in self.exponents)
        return [
            GroupElement((self.phase + j) / scale, exps) for j in range(scale)
        ]

    def complex_value(self, assignment: Mapping[str, complex]) -> complex:
        value = cmath.exp(2j * math.pi * float(self.phase))
        for var, e in self.exponents:
            base = complex(assignment[var])
            if base == 0:
                raise ValueError(f"generator {var} assigned zero")
            value *= cmath.exp(float(e) * cmath.log(base))
        return value

    def _key(self):
        return (
            self.phase.numerator,
            self.phase.denominator,
            tuple((v, e.numerator, e.denominator) for v, e in self.exponents),
        )

    def __str__(self) -> str:
        bits = []
        if self.phase == Fraction(1, 2):
            bits.append("-1")
        elif self.phase != 0:
            bits.append(f"zeta_{self.zeta_order}^{self.zeta_power}")
        for v, e in self.exponents:
            bits.append(v if e == 1 else f"{v}^{e}")
        return "*".join(bits) if bits else "1"


@dataclass(frozen=True)
class PolylogSymbol:
    """Formal classical polylogarithm symbol of weight n >= 2."""

    n: int
    arg: GroupElement

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"symbol weight must be >= 2, got {self.n}")

    def _key(self):
        return (self.n, self.arg._key())

    def __str__(self) -> str:
        return f"Li_{self.n}({self.arg})"


def _merge(pairs: Iterable[tuple[object, Fraction]]) -> list[tuple[object, Fraction]]:
    acc: dict = {}
    order: dict = {}
    for obj, coeff in pairs:
        key = obj._key() if hasattr(obj, "_key") else tuple(w._key() for w in obj)
        if key in acc:
            acc[key] += coeff
        else:
            acc[key] = coeff
            order[key] = obj
    out = [(order[k], c) for k, c in acc.items() if c != 0]
    out.sort(key=lambda pair: pair[0]._key() if hasattr(pair[0], "_key")
             else tuple(w._key() for w in pair[0]))
    return out


@dataclass(frozen=True)
class PolylogCombination:
    """Normalized rational combination of classical polylogarithm symbols."""

    terms: tuple[tuple[PolylogSymbol, Fraction], ...] = ()

    @staticmethod
    def from_terms(
        pairs: Iterable[tuple[PolylogSymbol, Fraction]]
    ) -> "PolylogCombination":
        return PolylogCombination(tuple(_merge(pairs)))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "PolylogCombination") -> "PolylogCombination":
        return PolylogCombination.from_terms(self.terms + other.terms)

    def __sub__(self, other: "PolylogCombination") -> "PolylogCombination":
        return self + other.scale(-1)

    def scale(self, c: Fraction | int) -> "PolylogCombination":
        c = Fraction(c)
        return PolylogCombination.from_terms(
            (s, c * q) for s, q in self.terms
        )

    def complex_value(
        self, assignment: Mapping[str, complex], evaluator
    ) -> complex:
        """Numeric value; `evaluator(n, z)` computes the classical Li_n(z)."""
        total = 0j
        for sym, coeff in self.terms:
            total += float(coeff) * evaluator(sym.n, sym.arg.complex_value(assignment))
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c}) {s}" for s, c in self.terms)


Word = tuple[PolylogSymbol, ...]


@dataclass(frozen=True)
class TensorElement:
    """Normalized combination of equal-length, equal-weight tensor words."""

    terms: tuple[tuple[Word, Fraction], ...] = ()

    def __post_init__(self) -> None:
        shapes = {
            (len(word), sum(s.n for s in word)) for word, _ in self.terms
        }
        if len(shapes) > 1:
            raise ValueError(f"inhomogeneous tensor element: {sorted(shapes)}")

    @staticmethod
    def from_terms(pairs: Iterable[tuple[Word, Fraction]]) -> "TensorElement":
        return TensorElement(tuple(_merge((tuple(w), c) for w, c in pairs)))

    @staticmethod
    def single(word: Word, coeff: Fraction | int = 1) -> "TensorElement":
        return TensorElement.from_terms([(tuple(word), Fraction(coeff))])

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TensorElement") -> "TensorElement":
        return TensorElement.from_terms(self.terms + other.terms)

    def __sub__(self, other: "TensorElement") -> "TensorElement":
        return self + other.scale(-1)

    def scale(self, c: Fraction | int) -> "TensorElement":
        c = Fraction(c)
        return TensorElement.from_terms((w, c * q) for w, q in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(
            "(" + str(c) + ") " + " (x) ".join(str(s) for s in w)
            for w, c in self.terms
        )


@dataclass(frozen=True)
class GeneratorTerm:
    """Depth-d generator symbol Li_{n-d;1,...,1}(a_1, ..., a_d)."""

    weight: int
    args: tuple[GroupElement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("generator needs depth at least 1")
        if self.weight < len(self.args):
            raise ValueError(
                f"weight {self.weight} below depth {len(self.args)}"
            )

    @property
    def depth(self) -> int:
        return len(self.args)

    def _key(self):
        return (self.weight, self.depth, tuple(a._key() for a in self.args))

    def __str__(self) -> str:
        head = f"{self.weight - self.depth};" + ",".join(["1"] * self.depth)
        return f"Li_{{{head}}}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class GeneratorCombination:
    """Normalized combination of generators of one weight and one depth."""

    terms: tuple[tuple[GeneratorTerm, Fraction], ...] = ()

    def __post_init__(self) -> None:
        shapes = {(g.weight, g.depth) for g, _ in self.terms}
        if len(shapes) > 1:
            raise ValueError(f"inhomogeneous generator combination: {sorted(shapes)}")

    @staticmethod
    def from_terms(
        pairs: Iterable[tuple[GeneratorTerm, Fraction]]
    ) -> "GeneratorCombination":
        return GeneratorCombination(tuple(_merge(pairs)))

    @staticmethod
    def single(
        weight: int, args: Sequence[GroupElement], coeff: Fraction | int = 1
    ) -> "GeneratorCombination":
        return GeneratorCombination.from_terms(
            [(GeneratorTerm(weight, tuple(args)), Fraction(coeff))]
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "GeneratorCombination") -> "GeneratorCombination":
        return GeneratorCombination.from_terms(self.terms + other.terms)

    def scale(self, c: Fraction | int) -> "GeneratorCombination":
        c = Fraction(c)
        return GeneratorCombination.from_terms((g, c * q) for g, q in self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c}) {g}" for g, c in self.terms)


# ---------------------------------------------------------------------------
# image of a generator


def compositions_min2(total: int, parts: int) -> list[tuple[int, ...]]:
    """All ordered splittings of `total` into `parts` parts, each >= 2."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(2, total - 2 * (parts - 1) + 1):
        for rest in compositions_min2(total - first, parts - 1):
            out.append((first,) + rest)
    return out


def cobracket_image(
    g: GeneratorTerm | GeneratorCombination,
) -> TensorElement:
    """Iterated-image tensor sum of a generator (or combination, linearly).

    For a single depth-d generator of weight n the image is the sum over
    compositions n_1 + ... + n_d = n with all n_i >= 2 of the word
    Li_{n_1}(a_1) x ... x Li_{n_d}(a_d); empty when n < 2d.
    """
    if isinstance(g, GeneratorCombination):
        out = TensorElement()
        for term, coeff in g.terms:
            out = out + cobracket_image(term).scale(coeff)
        return out
    words = []
    for comp in compositions_min2(g.weight, g.depth):
        word = tuple(PolylogSymbol(n, a) for n, a in zip(comp, g.args))
        words.append((word, Fraction(1)))
    return TensorElement.from_terms(words)


# ---------------------------------------------------------------------------
# distribution relations


def _contract_once(
    terms: list[tuple[PolylogSymbol, Fraction]], r: int
) -> tuple[list[tuple[PolylogSymbol, Fraction]], bool]:
    groups: dict = {}
    for sym, coeff in terms:
        key = (sym.n, sym.arg.exponents, (sym.arg.phase * r) % 1)
        groups.setdefault(key, []).append((sym, coeff))
    out: list[tuple[PolylogSymbol, Fraction]] = []
    changed = False
    for members in groups.values():
        coeffs = {c for _, c in members}
        if len(members) == r and len(coeffs) == 1:
            sym0, c = members[0]
            out.append(
                (
                    PolylogSymbol(sym0.n, sym0.arg.power(r)),
                    c * Fraction(1, r ** (sym0.n - 1)),
                )
            )
            changed = True
        else:
            out.extend(members)
    return out, changed


def distribution_contract(e: PolylogCombination, r: int) -> PolylogCombination:
    """Collapse complete equal-coefficient root orbits, repeatedly.

    Each orbit {Li_n(zeta b) : zeta^r = 1} with common coefficient c becomes
    c * r^{1-n} * Li_n(b^r); partial orbits and orbits with unequal
    coefficients are left untouched.  Passes repeat until nothing collapses,
    so a second call is a no-op.
    """
    if r < 1:
        raise ValueError("orbit order must be a positive integer")
    if r == 1:
        return PolylogCombination.from_terms(e.terms)
    terms = list(e.terms)
    changed = True
    while changed:
        terms, changed = _contract_once(terms, r)
    return PolylogCombination.from_terms(terms)


def distribution_expand(e: PolylogCombination, r: int) -> PolylogCombination:
    """Rewrite each Li_n(b) as r^{n-1} * sum over the r-th roots of b.

    Inverse of contraction on complete orbits.  Raises ValueError when a
    root would need an exponent denominator that is not a power of 2.
    """
    if r < 1:
        raise ValueError("orbit order must be a positive integer")
    out: list[tuple[PolylogSymbol, Fraction]] = []
    for sym, coeff in e.terms:
        scale = coeff * Fraction(r ** (sym.n - 1))
        exps = tuple((v, x / r) for v, x in sym.arg.exponents)
        for j in range(r):
            root = GroupElement((sym.arg.phase + j) / r, exps)
            out.append((PolylogSymbol(sym.n, root), scale))
    return PolylogCombination.from_terms(out)


def tensor_distribution_contract(te: TensorElement, r: int) -> TensorElement:
    """Slot-wise orbit contraction on tensor words, iterated to a fixpoint."""
    if r < 1:
        raise ValueError("orbit order must be a positive integer")
    if r == 1 or te.is_zero():
        return te
    depth = len(te.terms[0][0])
    terms = list(te.terms)
    changed = True
    while changed:
        changed = False
        for slot in range(depth):
            groups: dict = {}
            for word, coeff in terms:
                sym = word[slot]
                rest = tuple(w._key() for i, w in enumerate(word) if i != slot)
                key = (rest, sym.n, sym.arg.exponents, (sym.arg.phase * r) % 1)
                groups.setdefault(key, []).append((word, coeff))
            new_terms: list[tuple[Word, Fraction]] = []
            for members in groups.values():
                coeffs = {c for _, c in members}
                if len(members) == r and len(coeffs) == 1:
                    word0, c = members[0]
                    sym0 = word0[slot]
                    new_sym = PolylogSymbol(sym0.n, sym0.arg.power(r))
                    new_word = word0[:slot] + (new_sym,) + word0[slot + 1 :]
                    new_terms.append((new_word, c * Fraction(1, r ** (sym0.n - 1))))
                    changed = True
                else:
                    new_terms.extend(members)
            terms = list(TensorElement.from_terms(new_terms).terms)
    return TensorElement.from_terms(terms)


# ---------------------------------------------------------------------------
# root sums and the preimage construction


def root_sum_generator(
    c: GeneratorCombination,
    slot: int,
    s: int,
    *,
    term_cap: int = DEFAULT_TERM_CAP,
) -> GeneratorCombination:
    """Replace each term's slot argument by the sum of its 2^s-th roots."""
    if not c.terms:
        return c
    depth = c.terms[0][0].depth
    if not 1 <= slot <= depth:
        raise ValueError(f"slot must lie in 1..{depth}")
    if s < 0:
        raise ValueError("root level must be nonnegative")
    if len(c.terms) * 2**s > term_cap:
        raise RootCapExceeded(
            f"{len(c.terms)} * 2^{s} terms exceed the cap {term_cap}"
        )
    out = []
    for g, coeff in c.terms:
        for root in g.args[slot - 1].roots(s):
            args = g.args[: slot - 1] + (root,) + g.args[slot:]
            out.append((GeneratorTerm(g.weight, args), coeff))
    return GeneratorCombination.from_terms(out)


def _isolation_coefficients(domain: Sequence[int], target: int) -> dict[int, Fraction]:
    """Exact q_s with sum_s q_s * (2^{1-m})^s = [m == target] on the domain."""
    nodes = [Fraction(1, 2 ** (m - 1)) for m in domain]
    c = len(nodes)
    matrix = [[nodes[row] ** s for s in range(c)] for row in range(c)]
    rhs = [[Fraction(int(domain[row] == target))] for row in range(c)]
    solution = linalg.solve_exact(matrix, rhs)
    return {s: solution[s][0] for s in range(c) if solution[s][0] != 0}


def construct_preimage(
    weights: Sequence[int],
    args: Sequence[GroupElement],
    *,
    term_cap: int = DEFAULT_TERM_CAP,
) -> GeneratorCombination:
    """Generator combination whose contracted image is one tensor word.

    Slots are peeled from the last to the first: at slot j, the admissible
    slot weights m form the Vandermonde node set {2^{-(m-1)}}, root sums at
    levels s = 0..len-1 realize the powers of those nodes, and the exact
    solve isolates m = weights[j-1].
    """
    weights = tuple(int(w) for w in weights)
    if not weights:
        raise InfeasibleWeights("need at least one slot weight")
    if any(w < 2 for w in weights):
        raise InfeasibleWeights(f"every slot weight must be >= 2, got {weights}")
    if len(args) != len(weights):
        raise ValueError("one argument per slot weight required")
    n = sum(weights)
    d = len(weights)
    combo = GeneratorCombination.single(n, tuple(args))
    remaining = n
    for slot in range(d, 0, -1):
        if slot == 1:
            domain: list[int] = [remaining]
        else:
            domain = list(range(2, remaining - 2 * (slot - 1) + 1))
        target = weights[slot - 1]
        if len(domain) == 1:
            remaining -= target
            continue
        coeffs = _isolation_coefficients(domain, target)
        acc = GeneratorCombination()
        for s, q in sorted(coeffs.items()):
            acc = acc + root_sum_generator(combo, slot, s, term_cap=term_cap).scale(q)
        combo = acc
        if len(combo.terms) > term_cap:
            raise RootCapExceeded(
                f"{len(combo.terms)} terms exceed the cap {term_cap}"
            )
        remaining -= target
    return combo


@dataclass(frozen=True)
class PreimageReport:
    """Outcome of the exact image check for a constructed preimage."""

    target: TensorElement
    image: TensorElement
    residual: TensorElement

    @property
    def matched(self) -> bool:
        return self.residual.is_zero()


def verify_preimage(
    p: GeneratorCombination,
    weights: Sequence[int],
    args: Sequence[GroupElement],
) -> PreimageReport:
    """Exact check: image of p, contracted at 2-power orbits, equals the word
    Li_{w_1}(a_1) x ... x Li_{w_d}(a_d).  Failure shows up as a nonzero
    residual in the report, never as an exception.
    """
    word = tuple(
        PolylogSymbol(int(w), a) for w, a in zip(weights, args)
    )
    target = TensorElement.single(word)
    image = tensor_distribution_contract(cobracket_image(p), 2)
    return PreimageReport(target, image, image - target)
