import itertools

import pytest

from core.error_handling import FieldMismatchError, InternalConsistencyError, ValidationError
from core.linalg import (
    ChainMap,
    CochainComplex,
    Field,
    Matrix,
    associator,
    braiding,
    cohomology_dims,
    cone,
    direct_sum,
    induced_chain_map,
    random_complex,
    random_invertible,
    random_matrix,
    rank_and_kernel,
    tensor,
    tensor_maps,
)


def _rank_by_minors(m: Matrix) -> int:
    for k in range(min(m.rows, m.cols), 0, -1):
        for rows in itertools.combinations(range(m.rows), k):
            for cols in itertools.combinations(range(m.cols), k):
                if m.submatrix(rows, cols).det() != m.field.zero:
                    return k
    return 0


def test_identity_has_full_rank_and_empty_kernel(qq):
    m = Matrix.identity(qq, 3)
    assert m.rank() == 3
    assert m.kernel() == []


def test_zero_matrix_kernel_is_everything(qq):
    rank, kernel = rank_and_kernel(Matrix.zeros(qq, 2, 3))
    assert rank == 0
    assert len(kernel) == 3


def test_rank_over_f5_matches_minor_expansion(f5, rng):
    for _ in range(10):
        m = random_matrix(f5, 4, 4, rng)
        assert m.rank() == _rank_by_minors(m)


def test_large_matrices_use_the_sparse_path(qq):
    n = 25
    m = Matrix.from_rows(qq, [[1 if j in (i, (i + 1) % n) else 0 for j in range(n)] for i in range(n)])
    # 1 + x^n with n odd is invertible, so the circulant has full rank
    assert m.rank() == n
    assert (m @ m.inverse()) == Matrix.identity(qq, n)


def test_field_parsing_and_arithmetic(f5):
    assert f5("1/2") * f5(2) == f5.one
    assert f5.to_output(f5(-1)) == 4
    assert Field.from_name("fp:7") == Field(7)
    with pytest.raises(ValidationError):
        Field(4)
    with pytest.raises(ValidationError):
        f5("1/5")


def test_mixed_fields_are_rejected(qq, f5):
    with pytest.raises(FieldMismatchError):
        Matrix.identity(qq, 2) @ Matrix.identity(f5, 2)


def test_acyclic_identity_complex(qq):
    c = CochainComplex(qq, {0: 1, 1: 1}, {0: Matrix.identity(qq, 1)})
    assert cohomology_dims(c) == {}


def test_zero_differentials_keep_term_dims(qq):
    c = CochainComplex(qq, {-1: 2, 0: 1, 3: 4})
    assert cohomology_dims(c) == {-1: 2, 0: 1, 3: 4}


def test_rank_one_two_term_complex(qq):
    m = Matrix.from_rows(qq, [[1, 2], [2, 4]])
    c = CochainComplex(qq, {0: 2, 1: 2}, {0: m})
    assert cohomology_dims(c) == {0: 1, 1: 1}


def test_d_squared_must_vanish(qq):
    one = Matrix.identity(qq, 1)
    with pytest.raises(InternalConsistencyError):
        CochainComplex(qq, {0: 1, 1: 1, 2: 1}, {0: one, 1: one})


def test_cone_of_zero_map_is_shifted_sum(qq, rng):
    a = random_complex(qq, {0: 2, 1: 1}, rng)
    b = random_complex(qq, {0: 1, 1: 2}, rng)
    c = cone(ChainMap.zero(a, b))
    expected = cohomology_dims(direct_sum(qq, [a.shift(1), b]))
    assert cohomology_dims(c) == expected


def test_cone_of_identity_is_acyclic(qq, rng):
    a = random_complex(qq, {-1: 1, 0: 2, 1: 1}, rng)
    assert cohomology_dims(cone(ChainMap.identity(a))) == {}


def test_kunneth_for_tensor_products(f5, rng):
    a = random_complex(f5, {0: 2, 1: 2}, rng)
    b = random_complex(f5, {-1: 1, 0: 2}, rng)
    ha, hb = cohomology_dims(a), cohomology_dims(b)
    expected = {}
    for p, x in ha.items():
        for q, y in hb.items():
            expected[p + q] = expected.get(p + q, 0) + x * y
    assert cohomology_dims(tensor(a, b)) == expected


def test_associator_and_braiding_are_chain_isomorphisms(qq, rng):
    a = random_complex(qq, {0: 1, 1: 1}, rng)
    b = random_complex(qq, {-1: 1, 0: 1}, rng)
    c = random_complex(qq, {0: 2}, rng)
    alpha = associator(a, b, c).validate()
    assert alpha.is_chain_map()
    swap = braiding(a, b).validate()
    back = braiding(b, a)
    assert back.compose(swap) == ChainMap.identity(tensor(a, b))


def test_tensor_of_maps_composes(qq, rng):
    a = random_complex(qq, {0: 2}, rng)
    f = ChainMap(a, a, {0: random_invertible(qq, 2, rng)})
    g = ChainMap(a, a, {0: random_invertible(qq, 2, rng)})
    lhs = tensor_maps(f, g).compose(tensor_maps(g, f))
    rhs = tensor_maps(f.compose(g), g.compose(f))
    assert lhs == rhs


def test_induced_chain_map_of_identity(qq, rng):
    a = random_complex(qq, {0: 2, 1: 3, 2: 1}, rng)
    h = induced_chain_map(ChainMap.identity(a))
    assert h == ChainMap.identity(h.source)
