import cmath
import math
from fractions import Fraction

import pytest

from thetatrace.errors import ImTooSmall, TailBoundViolated
from thetatrace.lattice import EvenLattice
from thetatrace.qseries import eta_eval, jacobi_theta
from thetatrace.trace import (
    TracePoint,
    colored_partition_counts,
    graded_trace_series,
    insertion_counts_by_grade,
    moment_series,
    state_pairing,
    t_phase,
    theta_w,
    z_trace,
    z_vector,
)

L4 = EvenLattice(((4,),))
A2 = EvenLattice(((2, -1), (-1, 2)))
HALF = Fraction(1, 2)


def _brute_z_trace(L, beta, point, span=40):
    """Literal definition: sum over a large box, divided by eta^d."""
    d = L.dim
    a, b, tau = point.a, point.b, point.tau
    acc = 0j
    for idx in _grid(d, span):
        m = [idx[i] + float(Fraction(beta[i])) for i in range(d)]
        mb = [m[i] + b[i] for i in range(d)]
        mb2 = [m[i] + b[i] / 2 for i in range(d)]
        acc += cmath.exp(
            2j * math.pi * (complex(L.inner(a, mb2)) + tau * complex(L.inner(mb, mb)) / 2)
        )
    return acc / eta_eval(tau) ** d


def _grid(dim, span):
    if dim == 1:
        return [(k,) for k in range(-span, span + 1)]
    return [(k,) + rest for k in range(-span, span + 1) for rest in _grid(dim - 1, span)]


# ---------------------------------------------------------------------------
# the graded trace itself
# ---------------------------------------------------------------------------


def test_trace_point_validation():
    with pytest.raises(ValueError):
        TracePoint((0.1,), (0.2, 0.3), 1j)
    with pytest.raises(ValueError):
        TracePoint((0.1,), (0.2,), 1.0 - 0.5j)


@pytest.mark.parametrize("beta", [(Fraction(0),), (Fraction(1, 4),), (Fraction(1, 2),)])
def test_z_trace_matches_literal_sum_norm4(beta):
    pt = TracePoint((0.11 + 0.05j,), (0.21 - 0.09j,), 0.31 + 1.12j)
    assert abs(z_trace(L4, beta, pt) - _brute_z_trace(L4, beta, pt)) < 1e-12


def test_z_trace_matches_literal_sum_a2():
    pt = TracePoint((0.1 + 0.03j, -0.07j), (0.15, 0.08 - 0.04j), -0.22 + 0.95j)
    for beta in A2.cosets:
        got = z_trace(A2, beta, pt)
        want = _brute_z_trace(A2, beta, pt, span=14)
        assert abs(got - want) < 1e-11


def test_z_vector_follows_coset_order():
    pt = TracePoint((0.1,), (0.05,), 1.2j)
    vec = z_vector(L4, pt)
    assert len(vec) == 4
    for beta, val in zip(L4.cosets, vec):
        assert val == z_trace(L4, beta, pt)


def test_z_trace_rejects_low_tau():
    with pytest.raises(ImTooSmall):
        z_trace(L4, (0,), TracePoint((0.0,), (0.0,), 0.05j))


def test_z_trace_overflow_guard():
    # absurd imaginary insertion makes individual terms overflow
    with pytest.raises(TailBoundViolated):
        z_trace(L4, (0,), TracePoint((40j,), (0.0,), 1.0j))


def test_state_pairing_sign_convention():
    assert state_pairing(L4, (1,), (1,)) == -4
    assert state_pairing(A2, (1, 0), (0, 1)) == 1


# ---------------------------------------------------------------------------
# numerator theta function and the classical dictionary
# ---------------------------------------------------------------------------


def test_theta_w_is_numerator_sum():
    beta = (Fraction(1, 4),)
    a = (0.13 - 0.06j,)
    tau = 0.21 + 1.07j
    acc = 0j
    for k in range(-40, 41):
        m = k + 0.25
        acc += cmath.exp(2j * math.pi * (a[0] * 4 * m + tau * 4 * m * m / 2))
    assert abs(theta_w(L4, beta, a, tau) - acc) < 1e-12


@pytest.mark.parametrize(
    "z,tau", [(0.31 + 0.12j, 0.2 + 1.3j), (-0.15 + 0.4j, 1.05j), (0.05 - 0.22j, -0.3 + 0.9j)]
)
def test_norm4_module_thetas_assemble_classical_thetas(z, tau):
    """The four coset thetas at z*x combine, in pairs, into the four
    half-characteristic theta functions evaluated at z."""
    w = [theta_w(L4, (Fraction(j, 4),), (z / 2,), tau) for j in range(4)]
    combos = [
        (w[0] + w[2], jacobi_theta(0, 0, z, tau)),
        (w[0] - w[2], jacobi_theta(0, HALF, z, tau)),
        (w[1] + w[3], jacobi_theta(HALF, 0, z, tau)),
        (1j * w[1] - 1j * w[3], jacobi_theta(HALF, HALF, z, tau)),
    ]
    for lhs, rhs in combos:
        assert abs(lhs - rhs) < 1e-10 * max(1.0, abs(rhs))


# ---------------------------------------------------------------------------
# tau -> tau + 1
# ---------------------------------------------------------------------------


def test_t_phase_values_norm4():
    assert abs(t_phase(L4, (0,)) - cmath.exp(-2j * math.pi / 24)) < 1e-15
    # <beta,beta>/2 = 1/8 at the quarter coset: phase e^(2 pi i (1/8 - 1/24))
    assert abs(t_phase(L4, (Fraction(1, 4),)) - cmath.exp(2j * math.pi / 12)) < 1e-15


@pytest.mark.parametrize("L", [L4, A2])
def test_t_phase_checked_at_a_point(L):
    pt = TracePoint(
        tuple(0.1 + 0.02j for _ in range(L.dim)),
        tuple(0.07 - 0.03j for _ in range(L.dim)),
        0.23 + 1.1j,
    )
    for beta in L.cosets:
        # raises PredictionMismatch if the two sides disagree beyond tol
        t_phase(L, beta, pt, tol=1e-10)


def test_t_phase_against_direct_ratio():
    beta = (Fraction(1, 2),)
    pt = TracePoint((0.12,), (0.31,), 0.4 + 1.3j)
    lhs = z_trace(L4, beta, TracePoint(pt.a, pt.b, pt.tau + 1))
    shifted = TracePoint((pt.a[0] + pt.b[0],), pt.b, pt.tau)
    assert abs(lhs / z_trace(L4, beta, shifted) - t_phase(L4, beta)) < 1e-12


# ---------------------------------------------------------------------------
# exact q-expansion helpers
# ---------------------------------------------------------------------------


def test_colored_partition_counts_one_color():
    assert colored_partition_counts(1, 10) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_colored_partition_counts_convolution():
    one = colored_partition_counts(1, 12)
    two = colored_partition_counts(2, 12)
    for n in range(13):
        assert two[n] == sum(one[k] * one[n - k] for k in range(n + 1))


def test_moment_series_no_weights_is_theta():
    got = moment_series(L4, (0,), (), 8)
    assert got == {Fraction(0): 1 + 0j, Fraction(2): 2 + 0j, Fraction(8): 2 + 0j}


def test_moment_series_odd_moment_cancels():
    assert moment_series(L4, (0,), ((1.0,),), 10) == {}


def test_moment_series_second_moment_hand_value():
    got = moment_series(L4, (0,), ((1.0,), (1.0,)), 8)
    # m = +-k contributes <w,m>^2 = (4k)^2 each at exponent 2k^2
    assert got.keys() == {Fraction(2), Fraction(8)}
    assert abs(got[Fraction(2)] - 32) < 1e-12
    assert abs(got[Fraction(8)] - 128) < 1e-12


def test_graded_trace_series_zero_mode_free():
    got = graded_trace_series(L4, (0,), 4)
    shift = Fraction(1, 24)
    osc = colored_partition_counts(1, 4)
    # vacuum tower plus the two norm-2 vectors' towers
    for n in range(5):
        want = osc[n] + (2 * osc[n - 2] if n >= 2 else 0)
        assert abs(got[n - shift] - want) < 1e-12


def test_insertion_counts_by_grade_matches_series():
    grade_max = 5
    census = insertion_counts_by_grade(L4, (0,), grade_max)
    series = graded_trace_series(L4, (0,), grade_max)
    shift = Fraction(1, 24)
    for grade, by_point in census.items():
        total = sum(by_point.values())
        assert abs(series[grade - shift] - total) < 1e-12
