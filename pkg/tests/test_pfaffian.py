import numpy as np
import pytest

from xythermo import correlations, thermometry
from xythermo.pfaffian import pfaffian
from xythermo.spectrum import ChainSpec


def random_skew(m, rng):
    a = rng.standard_normal((m, m))
    return a - a.T


def test_two_by_two():
    assert pfaffian(np.array([[0.0, 3.5], [-3.5, 0.0]])) == 3.5


def test_four_by_four_closed_form():
    rng = np.random.default_rng(7)
    a, b, c, d, e, f = rng.standard_normal(6)
    mat = np.array([
        [0.0, a, b, c],
        [-a, 0.0, d, e],
        [-b, -d, 0.0, f],
        [-c, -e, -f, 0.0],
    ])
    assert pfaffian(mat) == pytest.approx(a * f - b * e + c * d, rel=1e-12)


@pytest.mark.parametrize("m", [2, 4, 6, 8, 12])
def test_square_equals_determinant(m):
    rng = np.random.default_rng(m)
    for _ in range(5):
        mat = random_skew(m, rng)
        assert pfaffian(mat) ** 2 == pytest.approx(np.linalg.det(mat), rel=1e-9)


def test_empty_matrix_is_one():
    assert pfaffian(np.zeros((0, 0))) == 1.0


def test_zero_row_gives_zero():
    mat = random_skew(6, np.random.default_rng(3))
    mat[2, :] = 0.0
    mat[:, 2] = 0.0
    assert pfaffian(mat) == 0.0


def test_block_form_reduces_to_determinant():
    # Pf([[0, C], [-C^T, 0]]) = (-1)^(m(m-1)/2) det C
    rng = np.random.default_rng(11)
    for m in (2, 3, 4):
        C = rng.standard_normal((m, m))
        mat = np.block([[np.zeros((m, m)), C], [-C.T, np.zeros((m, m))]])
        want = (-1) ** (m * (m - 1) // 2) * np.linalg.det(C)
        assert pfaffian(mat) == pytest.approx(want, rel=1e-10)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        pfaffian(np.zeros((3, 3)))  # odd dimension
    with pytest.raises(ValueError):
        pfaffian(np.ones((4, 4)))  # not skew-symmetric
    with pytest.raises(ValueError):
        pfaffian(np.zeros((4, 2)))


def test_wick_pfaffian_matches_toeplitz_route():
    """The pair correlator evaluated two independent ways.

    <sx_l sx_{l+r}> is a determinant of the r x r Toeplitz matrix of string
    coefficients, but it is also (-1)^r times the Pfaffian of the full 2r x 2r
    antisymmetric table of pairwise contractions of the string factors
    (B_l, A_{l+1}, B_{l+1}, ..., A_{l+r}).  Both must agree.
    """
    spec = ChainSpec(gamma=0.7, field_ratio=0.4, sites=10)
    kern = correlations.kernel(thermometry.ensemble(spec, 0.45))

    def contraction(op_a, op_b):
        kind_a, site_a = op_a
        kind_b, site_b = op_b
        if kind_a == kind_b:  # <A_i A_j> = delta, <B_i B_j> = -delta, i != j here
            return 0.0
        if kind_a == "A":
            return kern.coefficient(site_b - site_a)
        return -kern.coefficient(site_a - site_b)

    for r in (1, 2, 3, 4):
        ops = []
        for j in range(r):
            ops.append(("B", j))
            ops.append(("A", j + 1))
        mat = np.zeros((2 * r, 2 * r))
        for p in range(2 * r):
            for q in range(p + 1, 2 * r):
                mat[p, q] = contraction(ops[p], ops[q])
                mat[q, p] = -mat[p, q]
        via_pf = (-1) ** r * pfaffian(mat)
        assert via_pf == pytest.approx(correlations.xx_correlation(kern, r), abs=1e-12)
