import itertools

import pytest

from core.algebra import elements_fp, is_invertible, product_algebra
from core.error_handling import ComputationError, ProjectiveHomomorphismError, ValidationError
from core.invariants import (
    DECOMPOSABLE,
    K0Class,
    PicElement,
    balmer_primes,
    check_k0_multiplicative,
    class_of,
    count_units_fp,
    k0_multiplication_table,
    normalize_pic_arrows,
    pic_classify,
    pic_group_order_fp,
    pic_group_structure_fp,
    projective_points_fp,
    rescale_monoid_hom,
    skyscraper_table,
    skyscraper_tables_equivalent,
    table_is_idempotent_diagonal,
    unit_pic_element,
    verify_balmer_hypotheses,
)
from core.linalg import Matrix
from core.presets import algebra_preset, projective_space_fan
from core.quiver import build_algebra_quiver, build_toric_quiver, shift, simple, skyscraper_rep, unit_rep
from core.toric import cox_grading


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_k0_table_is_idempotent_diagonal(d):
    table = k0_multiplication_table(d)
    assert table_is_idempotent_diagonal(table)
    total = K0Class((0,) * d)
    for i in range(d):
        total = total + K0Class.basis(d, i)
    assert total == K0Class.unit(d)


def test_class_of_shifted_simple(qq):
    q = build_algebra_quiver(algebra_preset("k3", qq), 3)
    assert class_of(simple(q, (1,), 1)) == K0Class((0, -1, 0))
    assert class_of(unit_rep(q)) == K0Class.unit(3)


def test_k0_class_is_multiplicative(qq, rng):
    q = build_algebra_quiver(algebra_preset("k3", qq), 3)
    assert check_k0_multiplicative(q, rng, 5).passed


@pytest.mark.parametrize("name, units, order", [("k2", 4, 2), ("dual2", 6, 3)])
def test_pic_orders_over_f3(name, units, order, f3):
    A = algebra_preset(name, f3)
    assert count_units_fp(A) == units
    assert pic_group_order_fp(A) == order


def test_pic_orders_do_not_separate_dual3_from_msq(f5):
    dual3 = pic_group_structure_fp(algebra_preset("dual3", f5))
    msq = pic_group_structure_fp(algebra_preset("msq", f5))
    assert dual3.units == msq.units == 100
    assert dual3.order == msq.order == 2500


def test_unit_counts_need_a_small_prime_field(qq, f3):
    with pytest.raises(ValidationError):
        count_units_fp(algebra_preset("k2", qq))
    with pytest.raises(ComputationError):
        count_units_fp(product_algebra(13, f3))


def test_pic_classification_of_skyscrapers(f3):
    A = algebra_preset("k2", f3)
    q = build_algebra_quiver(A, 2)
    unit = unit_pic_element(A)
    assert unit == PicElement(0, ((f3(1), f3(1)),))
    element = pic_classify(skyscraper_rep(q, [1, 2]))
    assert element == PicElement(0, ((f3(1), f3(2)),))
    assert element.multiply(A, element) == unit
    assert element.multiply(A, unit) == element
    assert pic_classify(skyscraper_rep(q, [1, 0])) is None


def test_shift_is_recorded_in_pic_elements(f3):
    A = algebra_preset("dual2", f3)
    q = build_algebra_quiver(A, 2)
    element = pic_classify(shift(unit_rep(q), 1))
    assert element.shift == 1
    assert element.to_output(f3) == {"shift": 1, "arrows": [[1, 0]]}


@pytest.mark.parametrize("name", ["k3", "dual3"])
def test_pic_classes_match_the_group_order(name, f3):
    A = algebra_preset(name, f3)
    units = [x for x in elements_fp(A) if is_invertible(A, x)]
    classes = {normalize_pic_arrows(f3, arrows) for arrows in itertools.product(units, repeat=A.dim - 1)}
    assert len(classes) == pic_group_order_fp(A)


def test_pic_arrows_share_one_scalar(f3):
    A = algebra_preset("k3", f3)
    q = build_algebra_quiver(A, 3)
    one, two = f3(1), f3(2)
    # a common rescaling is the same class, rescaling one arrow is not
    assert pic_classify(skyscraper_rep(q, [1, 2, 2])) == pic_classify(skyscraper_rep(q, [2, 1, 1]))
    assert pic_classify(skyscraper_rep(q, [2, 1, 1])).arrows == ((one, two, two), (one, two, two))
    assert normalize_pic_arrows(f3, [(one, one, one), (two, two, two)]) != normalize_pic_arrows(
        f3, [(one, one, one), (one, one, one)]
    )


def test_pic_classification_needs_algebra_quiver(qq):
    q = build_toric_quiver(cox_grading(projective_space_fan(1)), [(0,), (1,)], qq)
    with pytest.raises(ValidationError):
        pic_classify(unit_rep(q))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_balmer_hypotheses_hold(d):
    results = verify_balmer_hypotheses(d)
    assert results
    assert all(r.passed for r in results)


def test_balmer_primes_are_generated_by_the_other_simples():
    primes = balmer_primes(3)
    assert [p.index for p in primes] == [0, 1, 2]
    assert primes[0].generators == ("S_1", "S_2")


@pytest.mark.parametrize(
    "rows, expected",
    [([[1, 0], [0, 1]], 1), ([[2, 0], [0, 2]], "1/2"), ([[0, 1], [1, 0]], 1)],
)
def test_rescale_projective_homomorphisms(rows, expected, qq):
    A = algebra_preset("k2", qq)
    c = rescale_monoid_hom(A, A, Matrix.from_rows(qq, rows))
    assert qq.to_output(c) == expected


def test_rescale_reports_the_failing_pair(qq):
    A = algebra_preset("k2", qq)
    with pytest.raises(ProjectiveHomomorphismError) as info:
        rescale_monoid_hom(A, A, Matrix.from_rows(qq, [[1, 1], [0, 1]]))
    assert info.value.witness == (0, 1)
    with pytest.raises(ValidationError):
        rescale_monoid_hom(A, A, Matrix.from_rows(qq, [[1, 1], [1, 1]]))


def test_projective_points_over_f3(f3):
    points = projective_points_fp(f3, 2)
    assert [tuple(f3.to_output(x) for x in p) for p in points] == [(0, 1), (1, 0), (1, 1), (1, 2)]


def test_skyscraper_table_of_k2(f3):
    A = algebra_preset("k2", f3)
    table = skyscraper_table(A, projective_points_fp(f3, 2))
    decomposable = {pair for pair, value in table.entries.items() if value == DECOMPOSABLE}
    assert decomposable == {(0, 1), (1, 0)}
    assert table.entries[(2, 3)] == (f3(1), f3(2))
    assert table.entries[(3, 3)] == (f3(1), f3(1))
    out = table.to_output()
    assert out["points"][1] == [1, 0]
    assert len(out["entries"]) == 16


def test_skyscraper_tables_tell_k2_from_dual2(f3):
    k2 = algebra_preset("k2", f3)
    assert skyscraper_tables_equivalent(k2, algebra_preset("k2", f3)) is not None
    assert skyscraper_tables_equivalent(k2, algebra_preset("dual2", f3)) is None
