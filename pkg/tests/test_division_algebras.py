import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slopelab import linalg
from slopelab.division_algebras import (
    DLambdaContext,
    centralizer_dimension,
    dl_inverse,
    f_to_pi_check,
    property_suite,
    shift_by_one_check,
    splitting_matrix,
    splitting_rep,
)
from slopelab.errors import ContextMismatch, NotInvertibleAtPrecision, NotLowestTerms

F = Fraction
CONTEXTS = [(5, 1, 2), (7, 2, 3), (3, -1, 4), (2, 1, 3)]


def matrix_model(x):
    """sum R(a_i) R(Pi)^i with R(a) = diag(sigma^k a) and R(Pi) cyclic, built by hand."""
    ctx = x.ctx
    h, ext = ctx.h, ctx.ext
    zero = ext.zero()
    pi = [[zero] * h for _ in range(h)]
    for i in range(h - 1):
        pi[i][i + 1] = ext.one()
    pi[h - 1][0] = ext(F(ctx.p) ** ctx.d)
    total = [[zero] * h for _ in range(h)]
    power = linalg.identity(h, ext.one(), zero)
    for a in x.coeffs:
        Ra = [[a.frobenius(i) if i == j else zero for j in range(h)] for i in range(h)]
        total = [[u + v for u, v in zip(r1, r2)] for r1, r2 in zip(total, linalg.matmul(Ra, power, zero))]
        power = linalg.matmul(power, pi, zero)
    return total


def mat_eq(a, b):
    return all((u - v).is_zero() for ra, rb in zip(a, b) for u, v in zip(ra, rb))


def test_pi_squared_example():
    ctx = DLambdaContext(5, 1, 2)
    rng = random.Random(0)
    a, b = ctx.ext.random_element(rng), ctx.ext.random_element(rng)
    x = ctx.scalar(a) * ctx.pi()
    y = ctx.scalar(b) * ctx.pi()
    assert x * y == ctx.scalar(a * b.frobenius() * 5)


def test_unit_and_relations():
    for p, d, h in CONTEXTS:
        ctx = DLambdaContext(p, d, h)
        rng = random.Random(p)
        x = ctx.random_element(rng)
        assert x * ctx.one() == x and ctx.one() * x == x
        a = ctx.ext.random_element(rng)
        assert (ctx.pi() * ctx.scalar(a) - ctx.scalar(a.frobenius()) * ctx.pi()).is_zero()
        assert ctx.pi(h) == ctx.scalar(F(p) ** d)


def test_noncommutative_when_h_above_one():
    ctx = DLambdaContext(3, 1, 2)
    w = ctx.monomial(1, 0)
    assert not (w * ctx.pi() == ctx.pi() * w)


def test_inverse_examples():
    ctx = DLambdaContext(7, 2, 3)
    assert dl_inverse(ctx.scalar(49)) == ctx.scalar(F(1, 49))
    assert dl_inverse(ctx.pi()) == ctx.pi(2) * ctx.scalar(F(1, 49))
    with pytest.raises(NotInvertibleAtPrecision):
        dl_inverse(ctx.zero())


@pytest.mark.parametrize("p,d,h", CONTEXTS)
def test_random_inverses(p, d, h):
    ctx = DLambdaContext(p, d, h, prec=20)
    rng = random.Random(h)
    for _ in range(10):
        x = ctx.random_element(rng)
        y = x.inverse()
        assert x * y == ctx.one() and y * x == ctx.one()


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(CONTEXTS), st.integers(0, 2**32))
def test_ring_axioms(ctx_args, seed):
    ctx = DLambdaContext(*ctx_args)
    rng = random.Random(seed)
    x, y, z = (ctx.random_element(rng) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(CONTEXTS), st.integers(0, 2**32))
def test_product_matches_matrix_model(ctx_args, seed):
    ctx = DLambdaContext(*ctx_args)
    rng = random.Random(seed)
    x, y = ctx.random_element(rng), ctx.random_element(rng)
    zero = ctx.ext.zero()
    assert mat_eq(matrix_model(x * y), linalg.matmul(matrix_model(x), matrix_model(y), zero))
    assert mat_eq(splitting_matrix(x), matrix_model(x))


def test_context_checks():
    with pytest.raises(NotLowestTerms):
        DLambdaContext(3, 2, 4)
    a, b = DLambdaContext(3, 1, 2), DLambdaContext(5, 1, 2)
    with pytest.raises(ContextMismatch):
        a.one() * b.one()


def test_generator_images():
    ctx = DLambdaContext(7, 2, 3)
    rep = splitting_rep(ctx, pairs=5)
    pi = rep.generator_images["Pi"]
    nonzero = [(i, j) for i in range(3) for j in range(3) if not pi[i][j].is_zero()]
    assert nonzero == [(0, 1), (1, 2), (2, 0)]
    assert pi[2][0] == ctx.ext(49)
    a = ctx.ext.random_element(random.Random(4))
    img = splitting_matrix(ctx.scalar(a))
    assert all(img[i][i] == a.frobenius(i) for i in range(3))
    assert rep.multiplicative and rep.span_dimension == 9


def test_lambda_zero_is_trivial():
    ctx = DLambdaContext(5, 0, 1)
    rep = splitting_rep(ctx, pairs=3)
    assert rep.generator_images["Pi"] == [[ctx.ext.one()]]
    assert rep.span_dimension == 1
    assert f_to_pi_check(5, 0)


@pytest.mark.parametrize("p,lam", [(5, F(1, 2)), (7, F(2, 3)), (3, F(-1, 4)), (2, F(3, 2))])
def test_f_to_pi(p, lam):
    assert f_to_pi_check(p, lam)


@pytest.mark.parametrize("p,d,h", CONTEXTS)
def test_centralizer_is_qp(p, d, h):
    assert centralizer_dimension(DLambdaContext(p, d, h)) == 1


@pytest.mark.parametrize("p,lam", [(5, F(1, 2)), (3, F(-2, 3)), (2, F(1, 4))])
def test_depends_on_lambda_mod_one(p, lam):
    assert shift_by_one_check(p, lam)


def test_suite_all_green():
    assert all(property_suite(5, 1, 2, samples=10).values())
