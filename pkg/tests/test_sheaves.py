from fractions import Fraction

import pytest

from core.error_handling import ComputationError, UnsupportedInputError, ValidationError
from core.presets import fan_preset, projective_space_fan
from core.quiver import build_toric_quiver, simple
from core.sheaves import (
    LineBundle,
    LineBundleComplex,
    Shift,
    Skyscraper,
    Sum,
    TwistedCotangentSimple,
    beilinson_kernel,
    cech_rgamma,
    cone_of,
    ec_product,
    fm_oracle_p1,
    identify_skyscraper,
    koszul_skyscraper,
    projective_dimension,
    recognize,
    render_simple,
    rep_of_sheaf,
    to_line_bundle_complex,
    twisted_cotangent_complex,
)
from core.toric import cox_grading, line_bundle_cohomology


def _quiver(n, field):
    return build_toric_quiver(cox_grading(projective_space_fan(n)), [(i,) for i in range(n + 1)], field)


@pytest.fixture
def p1_quiver(qq):
    return _quiver(1, qq)


@pytest.fixture
def p2_quiver(qq):
    return _quiver(2, qq)


@pytest.mark.parametrize("n", [1, 2])
def test_cech_matches_closed_form(n):
    fan = projective_space_fan(n)
    for a in range(-n - 3, 3):
        closed = line_bundle_cohomology(fan, [0] * n + [a])
        assert cech_rgamma(n, a).cohomology() == {p: d for p, d in closed.items() if d}


def test_cech_on_p3_top_cohomology():
    assert cech_rgamma(3, -4).cohomology() == {3: 1}


def test_cech_limits():
    with pytest.raises(UnsupportedInputError):
        cech_rgamma(4, 0)
    with pytest.raises(ComputationError):
        cech_rgamma(1, -20)


def test_cech_generators_multiply_sections():
    result = cech_rgamma(1, 1)
    assert result.cohomology() == {0: 2}
    x0 = result.generators[0]
    assert x0.source.same_as(result.complex)
    assert x0.is_chain_map()


def test_euler_presentation_of_twisted_cotangent():
    c = twisted_cotangent_complex(2, 1)
    assert c.terms == {0: ((0,), (0,), (0,)), 1: ((1,),)}
    assert cech_rgamma(2, c).cohomology() == {}
    assert cech_rgamma(2, c, -1).cohomology() == {1: 1}
    with pytest.raises(ValidationError):
        twisted_cotangent_complex(2, 3)


def test_koszul_resolution_of_a_point():
    c = koszul_skyscraper(2, [1, 2, 3])
    assert c.terms == {-2: ((-2,),), -1: ((-1,), (-1,)), 0: ((0,),)}
    for twist in (-2, 0, 1):
        assert cech_rgamma(2, c, twist).cohomology() == {0: 1}
    with pytest.raises(ValidationError):
        koszul_skyscraper(2, [0, 0, 0])


@pytest.mark.parametrize("twist, expected", [((0, 0), {0: 1}), ((2, -1), {0: 2}), ((-1, -1), {1: 1})])
def test_beilinson_kernel_resolves_the_diagonal(twist, expected):
    # RGamma(O_diagonal(a, b)) = RGamma(P^1, O(a + b))
    assert cech_rgamma(1, beilinson_kernel(1), twist).cohomology() == expected


def test_line_bundle_complex_checks_degrees_and_square_zero():
    with pytest.raises(ValidationError):
        LineBundleComplex((1,), {-1: ((-1,),), 0: ((0,),)}, {-1: (({(2, 0): 1},),)})
    x0 = {(1, 0): 1}
    with pytest.raises(ValidationError):
        LineBundleComplex((1,), {0: ((0,),), 1: ((1,),), 2: ((2,),)}, {0: ((x0,),), 1: ((x0,),)})


def test_shifted_complexes_flip_differential_signs():
    c = cone_of(1, -1, 0, {(1, 0): 1}).complex.shift(1)
    assert c.terms == {-2: ((-1,),), -1: ((0,),)}
    assert c.entry(-2, 0, 0) == {(1, 0): Fraction(-1)}


def test_skyscraper_point_is_normalized():
    assert Skyscraper((2, 4)).point == (1, 2)
    assert Skyscraper((0, 3)).render() == "sky[0,1]"
    with pytest.raises(ValidationError):
        Skyscraper((0, 0))


def test_render_simple():
    assert render_simple(2, 0, 0) == "O"
    assert render_simple(2, 0, 1) == "O[1]"
    assert render_simple(2, 1, 0) == "Omega^1(1)[1]"
    assert render_simple(2, 2, 0) == "O(-1)[2]"
    assert render_simple(2, 2, -2) == "O(-1)"


def test_dictionary_images_of_simples(p2_quiver):
    q = p2_quiver
    assert recognize(rep_of_sheaf(q, LineBundle(0))) == "O"
    assert recognize(rep_of_sheaf(q, TwistedCotangentSimple(1))) == "Omega^1(1)[1]"
    assert recognize(rep_of_sheaf(q, LineBundle(-1))) == "O(-1)"
    assert recognize(rep_of_sheaf(q, Shift(1, LineBundle(0)))) == "O[1]"
    assert recognize(rep_of_sheaf(q, Sum(LineBundle(0), TwistedCotangentSimple(1)))) == "O + Omega^1(1)[1]"
    assert rep_of_sheaf(q, TwistedCotangentSimple(2)).same_as(simple(q, (2,)))


def test_twisted_cotangent_via_cech_agrees_with_bott(p2_quiver):
    V = rep_of_sheaf(p2_quiver, to_line_bundle_complex(TwistedCotangentSimple(1), 2))
    assert recognize(V) == "Omega^1(1)[1]"


def test_identify_skyscraper(p2_quiver):
    V = rep_of_sheaf(p2_quiver, Skyscraper((2, 4, 6)))
    assert identify_skyscraper(V) == tuple(p2_quiver.field(x) for x in (1, 2, 3))
    assert recognize(V) == "sky[1,2,3]"
    assert identify_skyscraper(rep_of_sheaf(p2_quiver, LineBundle(0))) is None


def test_cone_of_a_section_is_a_skyscraper(p1_quiver):
    # x0 vanishes at [0:1]
    V = rep_of_sheaf(p1_quiver, cone_of(1, -1, 0, {(1, 0): 1}))
    assert recognize(V) == "sky[0,1]"


@pytest.mark.parametrize(
    "left, right, expected",
    [
        (Skyscraper((1, 0)), Skyscraper((0, 1)), "O + O(-1)[1]"),
        (Skyscraper((1, 2)), Skyscraper((1, 3)), "sky[1,6]"),
        (LineBundle(0), LineBundle(0), "O"),
        (LineBundle(0), Skyscraper((1, 5)), "O"),
    ],
)
def test_convolution_products_on_p1(p1_quiver, left, right, expected):
    assert ec_product(p1_quiver, left, right).recognized == expected


def test_convolution_is_commutative_on_skyscrapers(p2_quiver):
    a, b = Skyscraper((1, 1, 2)), Skyscraper((1, 3, 1))
    assert ec_product(p2_quiver, a, b).recognized == ec_product(p2_quiver, b, a).recognized == "sky[1,3,2]"


@pytest.mark.parametrize(
    "left, right",
    [
        (LineBundle(0), LineBundle(0)),
        (Skyscraper((1, 1)), Skyscraper((1, -1))),
        (LineBundle(0), Skyscraper((1, 2))),
    ],
)
def test_geometric_oracle_agrees_on_p1(p1_quiver, left, right):
    product = ec_product(p1_quiver, left, right)
    assert fm_oracle_p1(left, right) == product.rep.cohomology()


def test_sheaf_expressions_need_projective_space(qq):
    q = build_toric_quiver(cox_grading(fan_preset("p1xp1")), [(0, 0), (1, 0)], qq)
    with pytest.raises(ValidationError):
        projective_dimension(q)
    with pytest.raises(ValidationError):
        rep_of_sheaf(_quiver(1, qq), Skyscraper((1, 2, 3)))
