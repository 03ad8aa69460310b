import json
from fractions import Fraction

from mplkit.coalgebra import (
    GroupElement,
    TensorElement,
    PolylogSymbol,
    cobracket_image,
    construct_preimage,
    verify_preimage,
)
from mplkit.reduction import reduce_li, weight4_fixture_identity
from mplkit.serialize import (
    generator_combination_dumps,
    generator_combination_loads,
    identity_dumps,
    identity_loads,
    identity_to_latex,
    preimage_report_to_dict,
    report_dumps,
    tensor_element_from_dict,
    tensor_element_to_dict,
)
from mplkit.verify import VerificationPlan, verify_identity


def test_identity_round_trip_structural():
    ident = weight4_fixture_identity()
    text = identity_dumps(ident)
    back = identity_loads(text)
    assert back.lhs == ident.lhs
    assert back.rhs == ident.rhs
    assert back.weight == ident.weight
    assert back.variables == ident.variables
    assert identity_dumps(back) == text  # bit-exact second pass


def test_identity_round_trip_generated():
    ident = reduce_li(1, 3)
    text = identity_dumps(ident)
    assert identity_dumps(identity_loads(text)) == text


def test_identity_json_shape():
    d = json.loads(identity_dumps(weight4_fixture_identity()))
    assert d["schema_version"] == 1
    assert d["kind"] == "identity"
    assert d["weight"] == 4
    assert d["variables"] == ["x", "y"]
    term = d["lhs"][0]
    assert set(term) == {"coeff", "factors"}
    assert term["coeff"] == {"num": "1", "den": "1"}
    factor = term["factors"][0]
    assert factor["indices"] == [2, 2]
    mono = factor["args"][0]
    assert set(mono) == {"zeta_order", "zeta_pow", "exponents"}


def test_generator_combination_round_trip():
    gens = (GroupElement.generator("a1"), GroupElement.generator("a2"))
    combo = construct_preimage((3, 2), gens)
    text = generator_combination_dumps(combo)
    back = generator_combination_loads(text)
    assert back == combo
    assert generator_combination_dumps(back) == text


def test_tensor_element_round_trip():
    gens = (GroupElement.generator("a1"), GroupElement.generator("a2"))
    te = cobracket_image(construct_preimage((3, 2), gens))
    d = tensor_element_to_dict(te)
    assert tensor_element_from_dict(d) == te


def test_preimage_report_dict():
    gens = (GroupElement.generator("a1"),)
    report = verify_preimage(construct_preimage((4,), gens), (4,), gens)
    d = preimage_report_to_dict(report)
    assert d["matched"] is True
    assert d["residual"]["terms"] == []


def test_report_dumps_deterministic():
    ident = weight4_fixture_identity()
    plan = VerificationPlan(seed=3, point_count=4)
    a = report_dumps(verify_identity(ident, plan))
    b = report_dumps(verify_identity(ident, plan))
    assert a == b
    d = json.loads(a)
    assert d["pass"] is True
    # all numeric payloads are decimal strings
    assert isinstance(d["max_relative_residual"], str)
    assert isinstance(d["points"][0]["lhs"]["re"], str)


def test_latex_rendering():
    tex = identity_to_latex(weight4_fixture_identity())
    assert tex.startswith(r"\Li_{2,2}\left(x, y\right) =")
    assert r"\Li_{3,1}" in tex
    assert r"\frac{1}{2}" in tex
    assert r"\cdot" in tex  # the product term Li_1 * Li_3


def test_latex_monomial_forms():
    from mplkit.symalg import ArgMonomial, Identity, li_expr

    m = ArgMonomial.make({"x": Fraction(1, 2), "y": Fraction(-1, 2)}, 2, 1)
    e = li_expr([3, 1], [m, ArgMonomial.variable("y")])
    ident = Identity(e, e, weight=4, variables=frozenset({"x", "y"}))
    tex = identity_to_latex(ident)
    assert "x^{1/2}" in tex and "y^{-1/2}" in tex
    assert tex.count("-x^{1/2}") >= 1  # zeta_2 rendered as a sign
