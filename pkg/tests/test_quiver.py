import random

import pytest

from core.algebra import multiply
from core.error_handling import ValidationError
from core.presets import algebra_preset, projective_space_fan
from core.quiver import (
    RepMorphism,
    associator_morphism,
    braiding_morphism,
    build_algebra_quiver,
    build_toric_quiver,
    cohomology_rep,
    cone_rep,
    comult_is_coassociative,
    comult_is_cocommutative,
    comult_is_counital,
    decompose_zero_arrow,
    direct_sum_reps,
    evaluation_rep,
    exponents_of_total_degree,
    hom_space_dim,
    kan_extend_representables,
    left_unitor,
    quiver_tensor,
    random_rep,
    representable,
    restrict,
    right_unitor,
    shift,
    simple,
    skyscraper_rep,
    unit_rep,
    weights_to_text,
)
from core.toric import cox_grading


@pytest.fixture
def beilinson_p2(qq):
    return build_toric_quiver(cox_grading(projective_space_fan(2)), [(0,), (1,), (2,)], qq)


def test_exponents_of_total_degree():
    assert exponents_of_total_degree(2, 2) == [(0, 2), (1, 1), (2, 0)]
    assert exponents_of_total_degree(3, 0) == [(0, 0, 0)]
    assert exponents_of_total_degree(3, -1) == []


def test_beilinson_quiver_arrows(beilinson_p2):
    q = beilinson_p2
    assert len(q.hom((0,), (1,))) == 3
    assert len(q.hom((0,), (2,))) == 6
    assert q.hom((1,), (0,)) == ()
    assert len(q.arrows()) == 12
    generators = q.generators()
    assert len(generators) == 6
    assert all(b[0] - a[0] == 1 for a, b, _ in generators)


def test_toric_comultiplication_is_group_like(beilinson_p2):
    q = beilinson_p2
    assert comult_is_coassociative(q)
    assert comult_is_counital(q)
    assert comult_is_cocommutative(q)
    assert q.coproduct((1, 0, 1)) == (((1, 0, 1), (1, 0, 1), q.field.one),)


@pytest.mark.parametrize("name, cocommutative", [("k2", True), ("dual3", True), ("msq", True), ("mat2", False)])
def test_algebra_comultiplication_laws(name, cocommutative):
    q = build_algebra_quiver(algebra_preset(name), 3)
    assert comult_is_coassociative(q)
    assert comult_is_counital(q)
    assert comult_is_cocommutative(q) is cocommutative


def test_weight_length_is_checked(qq):
    g = cox_grading(projective_space_fan(1))
    with pytest.raises(ValidationError):
        build_toric_quiver(g, [(0, 0)], qq)
    with pytest.raises(ValidationError):
        build_toric_quiver(g, [], qq)


def test_simple_needs_a_vertex(beilinson_p2):
    with pytest.raises(ValidationError):
        simple(beilinson_p2, (5,))
    with pytest.raises(ValidationError):
        beilinson_p2.restrict([(0,), (7,)])


def test_evaluation_rep_acts_by_monomial_values(beilinson_p2):
    V = evaluation_rep(beilinson_p2, [1, 2, 3]).validate()
    f = V.act((0,), (1,), (0, 1, 0))
    assert f.component(0)[0, 0] == beilinson_p2.field(2)
    g = V.act((0,), (2,), (0, 1, 1))
    assert g.component(0)[0, 0] == beilinson_p2.field(6)
    with pytest.raises(ValidationError):
        evaluation_rep(beilinson_p2, [1, 2])


def test_tensor_of_evaluations_is_pointwise_product(beilinson_p2):
    V = evaluation_rep(beilinson_p2, [1, 2, 3])
    W = evaluation_rep(beilinson_p2, [2, 0, -1])
    assert quiver_tensor(V, W).same_as(evaluation_rep(beilinson_p2, [2, 0, -3]))


def test_tensor_of_skyscrapers_is_skyscraper_of_product():
    A = algebra_preset("dual2")
    q = build_algebra_quiver(A, 3)
    a, b = [1, 1], [1, 2]
    product = quiver_tensor(skyscraper_rep(q, a), skyscraper_rep(q, b))
    assert product.same_as(skyscraper_rep(q, multiply(A, a, b)))


def test_skyscraper_needs_algebra_quiver_and_nonzero_point(beilinson_p2):
    with pytest.raises(ValidationError):
        skyscraper_rep(beilinson_p2, [1, 0, 0])
    q = build_algebra_quiver(algebra_preset("k2"), 2)
    with pytest.raises(ValidationError):
        skyscraper_rep(q, [0, 0])


def test_unitors_are_isomorphisms(beilinson_p2, rng):
    V = random_rep(beilinson_p2, rng)
    for morphism in (left_unitor(V), right_unitor(V)):
        assert morphism.validate().is_isomorphism()


def _check_tensor_laws(q, rng):
    U, V, W = (random_rep(q, rng) for _ in range(3))
    assert associator_morphism(U, V, W).validate().is_isomorphism()
    swap = braiding_morphism(V, W).validate()
    back = braiding_morphism(W, V).validate()
    round_trip = back.compose(swap)
    identity = RepMorphism.identity(swap.source)
    assert all(round_trip.component(v) == identity.component(v) for v in q.vertices)


@pytest.mark.parametrize("name", ["k2", "dual2", "msq"])
def test_tensor_laws_on_algebra_quivers(name, f5, rng):
    q = build_algebra_quiver(algebra_preset(name, f5), 3)
    for _ in range(3):
        _check_tensor_laws(q, rng)


def test_tensor_laws_on_toric_quiver(beilinson_p2, rng):
    for _ in range(3):
        _check_tensor_laws(beilinson_p2, rng)


@pytest.mark.slow
def test_tensor_laws_on_many_seeded_triples(f5):
    quivers = [
        build_toric_quiver(cox_grading(projective_space_fan(2)), [(0,), (1,), (2,)], f5),
        build_algebra_quiver(algebra_preset("k3", f5), 3),
        build_algebra_quiver(algebra_preset("dual3", f5), 3),
    ]
    rng = random.Random(7)
    for seed in range(50):
        _check_tensor_laws(quivers[seed % len(quivers)], rng)


def test_representables_satisfy_yoneda(beilinson_p2):
    q = beilinson_p2
    top = representable(q, (2,))
    assert top.dims()[(0,)] == {0: 6}
    assert hom_space_dim(top, unit_rep(q)) == 1
    assert hom_space_dim(representable(q, (0,)), top) == 6
    assert hom_space_dim(top, representable(q, (0,))) == 0


def test_hom_space_between_simples(beilinson_p2):
    q = beilinson_p2
    assert hom_space_dim(simple(q, (1,)), simple(q, (1,))) == 1
    assert hom_space_dim(simple(q, (0,)), simple(q, (1,))) == 0
    assert hom_space_dim(simple(q, (1,)), simple(q, (1,), 1)) == 0


def test_restriction_then_kan_extension(beilinson_p2):
    q = beilinson_p2
    small = restrict(representable(q, (1,)), [(0,), (1,)])
    assert small.quiver.vertices == ((0,), (1,))
    assert small.presentation is not None
    assert kan_extend_representables(small, q).same_as(representable(q, (1,)))


def test_kan_extension_needs_presentation_inside_subset(beilinson_p2):
    q = beilinson_p2
    small = restrict(representable(q, (2,)), [(0,), (1,)])
    assert small.presentation is None
    with pytest.raises(ValidationError):
        kan_extend_representables(small, q)


def test_decompose_zero_arrow(beilinson_p2):
    q = beilinson_p2
    V = direct_sum_reps([simple(q, (0,), 1), simple(q, (2,), -1), simple(q, (2,), -1)])
    assert decompose_zero_arrow(V) == [((0,), 1), ((2,), -1), ((2,), -1)]
    with pytest.raises(ValidationError):
        decompose_zero_arrow(unit_rep(q))


def test_shift_moves_every_value(beilinson_p2):
    V = shift(unit_rep(beilinson_p2), 2)
    assert all(dims == {-2: 1} for dims in V.cohomology().values())
    assert len(V.actions) == len(unit_rep(beilinson_p2).actions)


def test_cohomology_rep_keeps_actions(beilinson_p2):
    V = representable(beilinson_p2, (2,))
    H = cohomology_rep(V)
    assert H.cohomology() == V.cohomology()
    assert set(H.actions) == set(V.actions)


def test_weights_to_text():
    assert weights_to_text([(0,), (-1,), (-2,)]) == "{0, -1, -2}"
    assert weights_to_text([(0, 1), (1, 0)]) == "{(0,1), (1,0)}"


def test_cone_of_identity_is_acyclic(beilinson_p2):
    V = representable(beilinson_p2, (1,))
    C = cone_rep(RepMorphism.identity(V).validate())
    assert not C.relation_failures()
    assert all(not dims for dims in C.cohomology().values())


def test_cone_of_zero_morphism_splits(beilinson_p2):
    V, W = representable(beilinson_p2, (1,)), simple(beilinson_p2, (0,))
    C = cone_rep(RepMorphism(V, W, {}).validate())
    assert C.cohomology() == direct_sum_reps([shift(V, 1), W]).cohomology()
