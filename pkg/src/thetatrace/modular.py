"""Integer 2x2 matrices of determinant one, their action on the trace data,
and numerical recovery of the transition matrices between module traces.

The central object is the linear relation

    z_vector(L, (v, u, alpha.tau))  =  A(alpha) . z_vector(L, psi_alpha(v, u), tau)

with A(alpha) a constant matrix indexed by dual cosets and

    psi_alpha(v, u) = (d v + b u, f v + a u)      alpha = (a b; f d).

A is recovered by least squares over sampled (v, u, tau) triples and then
validated on held-out points.  The pair map composes contravariantly,
psi_beta(psi_alpha(v, u)) = psi_{alpha beta}(v, u), which makes A a
homomorphism: A(alpha beta) = A(alpha) A(beta); verify_cocycle measures
exactly that.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import BoundTooLarge, IllConditioned
from .lattice import EvenLattice
from .qseries import require_im
from .trace import TracePoint, z_vector

COND_CAP = 1e10
WORD_FLOOR = 5e-3
WORD_RTOL = 1e-10


@dataclass(frozen=True)
class UnimodularMatrix:
    """(a b; f d) with integer entries and ad - bf = 1."""

    a: int
    b: int
    f: int
    d: int

    def __post_init__(self):
        for x in (self.a, self.b, self.f, self.d):
            if x != int(x):
                raise ValueError("entries must be integers")
        if self.a * self.d - self.b * self.f != 1:
            raise ValueError("determinant must be 1")

    def __mul__(self, other: "UnimodularMatrix") -> "UnimodularMatrix":
        return UnimodularMatrix(
            self.a * other.a + self.b * other.f,
            self.a * other.b + self.b * other.d,
            self.f * other.a + self.d * other.f,
            self.f * other.b + self.d * other.d,
        )

    def __neg__(self) -> "UnimodularMatrix":
        # -1 = S * S, still determinant one
        return UnimodularMatrix(-self.a, -self.b, -self.f, -self.d)

    def inverse(self) -> "UnimodularMatrix":
        return UnimodularMatrix(self.d, -self.b, -self.f, self.a)

    def act_tau(self, tau: complex) -> complex:
        require_im(tau, 0.0)
        return (self.a * tau + self.b) / (self.f * tau + self.d)

    def act_pair(self, v: Sequence, u: Sequence) -> Tuple[tuple, tuple]:
        """The insertion-pair substitution attached to this matrix.

        Note the arrangement (d v + b u, f v + a u): it is the unique one
        that composes contravariantly with matrix products, so that the
        fitted transition matrices multiply in word order.  The naive
        row-action (a v + b u, f v + d u) agrees on S and T but admits no
        constant transition matrix already for length-two words.
        """
        vv = tuple(self.d * x + self.b * y for x, y in zip(v, u))
        uu = tuple(self.f * x + self.a * y for x, y in zip(v, u))
        return vv, uu

    def act_point(self, point: TracePoint) -> TracePoint:
        vv, uu = self.act_pair(point.a, point.b)
        return TracePoint(vv, uu, point.tau)


IDENTITY = UnimodularMatrix(1, 0, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)
T = UnimodularMatrix(1, 1, 0, 1)

_TOKENS = {"S": S, "T": T, "T^-1": T.inverse()}


def word_to_matrix(tokens: Sequence[str]) -> UnimodularMatrix:
    out = IDENTITY
    for t in tokens:
        out = out * _TOKENS[t]
    return out


def decompose_ST(alpha: UnimodularMatrix, token_cap: int = 10**6):
    """Write alpha as a word in S, T, T^-1 up to overall sign.

    Returns (tokens, sign) with word_to_matrix(tokens) == sign * alpha; the
    reconstruction is asserted before returning.  Continued-fraction style:
    while the lower-left entry is nonzero, strip T^k S with k = round(a/f),
    which at least halves |f|.
    """
    tokens: List[str] = []
    s_inv = S.inverse()
    m = alpha
    budget = token_cap

    def emit_t(k: int):
        nonlocal budget
        if abs(k) > budget:
            raise BoundTooLarge("decomposition word exceeds the token cap")
        budget -= abs(k)
        tokens.extend(["T" if k > 0 else "T^-1"] * abs(k))

    while m.f != 0:
        k = round(m.a / m.f)
        emit_t(k)
        tokens.append("S")
        m = s_inv * _t_power(-k) * m
    # now m = (sign, sign*m.b; 0, sign)
    sign = m.a
    emit_t(sign * m.b)
    check = word_to_matrix(tokens)
    assert check == (alpha if sign == 1 else -alpha), "reconstruction failed"
    return tokens, sign


def _t_power(k: int) -> UnimodularMatrix:
    return UnimodularMatrix(1, k, 0, 1)


@dataclass(frozen=True)
class TransitionMatrix:
    """Fitted coset-indexed matrix for one unimodular element."""

    alpha: UnimodularMatrix
    entries: tuple
    fit_residual: float

    @property
    def size(self) -> int:
        return len(self.entries)

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=complex)


def sample_points(
    dim: int,
    count: int,
    seed: int,
    scale: float = 0.2,
    re_range: Tuple[float, float] = (-0.4, 0.4),
    im_range: Tuple[float, float] = (0.8, 1.6),
    re_center: float = 0.0,
    real_vectors: bool = False,
) -> List[TracePoint]:
    """Deterministic batch of trace evaluation points in general position.

    Vector components are bounded draws (uniform in a disc-like box) so term
    magnitudes in the trace sums stay controlled.
    """
    rng = np.random.default_rng(seed)

    def vec():
        re = rng.uniform(-1.0, 1.0, size=dim)
        im = 0.0 if real_vectors else rng.uniform(-1.0, 1.0, size=dim)
        return tuple((re + 1j * im) * scale)

    out = []
    for _ in range(count):
        tau = complex(re_center + rng.uniform(*re_range), rng.uniform(*im_range))
        out.append(TracePoint(vec(), vec(), tau))
    return out


def adapted_samples(
    alpha: UnimodularMatrix, dim: int, count: int, seed: int, scale: float = 0.2
) -> List[TracePoint]:
    """Sample points keeping both tau and alpha.tau comfortably evaluable.

    Im(alpha.tau) = Im tau / |f tau + d|^2 collapses when tau strays from
    -d/f, so for f != 0 the real parts are drawn near that center with a
    moderate Im tau; then Im(alpha.tau) >= roughly 1/f^2.  Insertion vectors
    are kept real there: theta values with complex characteristics grow like
    exp(pi |Im a|^2 / Im tau), which at small Im(alpha.tau) would swamp an
    absolute residual with double-precision cancellation noise, while the
    relation itself extends from real to complex vectors by analyticity.
    """
    if alpha.f == 0:
        return sample_points(dim, count, seed, scale)
    return sample_points(
        dim,
        count,
        seed,
        scale / 2,
        re_range=(-0.15, 0.15),
        im_range=(0.3, 0.55),
        re_center=-alpha.d / alpha.f,
        real_vectors=True,
    )


def _vector_table(
    L: EvenLattice,
    alpha: UnimodularMatrix,
    points: Sequence[TracePoint],
    im_floor: float,
    rtol: float,
):
    """(lhs, rhs) sample matrices: rows are points, columns are cosets."""
    lhs = []
    rhs = []
    for pt in points:
        moved = TracePoint(pt.a, pt.b, alpha.act_tau(pt.tau))
        lhs.append(z_vector(L, moved, im_floor, rtol))
        rhs.append(z_vector(L, alpha.act_point(pt), im_floor, rtol))
    return np.array(lhs, dtype=complex), np.array(rhs, dtype=complex)


def fit_transition(
    L: EvenLattice,
    alpha: UnimodularMatrix,
    samples: Sequence[TracePoint],
    im_floor: float = WORD_FLOOR,
    rtol: float = WORD_RTOL,
) -> TransitionMatrix:
    """Least-squares recovery of the transition matrix from sample triples.

    Solves lhs[s, h] = sum_k A[h, k] rhs[s, k] for A over all samples at
    once; the shared coefficient matrix rhs must be well conditioned or
    IllConditioned is raised.
    """
    m = len(L.cosets)
    if len(samples) < 2 * m:
        raise ValueError(f"need at least {2 * m} samples, got {len(samples)}")
    lhs, rhs = _vector_table(L, alpha, samples, im_floor, rtol)
    cond = np.linalg.cond(rhs)
    if not np.isfinite(cond) or cond > COND_CAP:
        raise IllConditioned(f"sample matrix condition number {cond:.3e}")
    x, *_ = np.linalg.lstsq(rhs, lhs, rcond=None)
    a = x.T
    residual = float(np.max(np.abs(rhs @ x - lhs))) if len(samples) else 0.0
    return TransitionMatrix(alpha, tuple(map(tuple, a)), residual)


def verify_relation(
    L: EvenLattice,
    alpha: UnimodularMatrix,
    holdout: Sequence[TracePoint],
    fitted: TransitionMatrix,
    im_floor: float = WORD_FLOOR,
    rtol: float = WORD_RTOL,
) -> dict:
    """Max residual of the transition relation on held-out points."""
    lhs, rhs = _vector_table(L, alpha, holdout, im_floor, rtol)
    a = fitted.as_array()
    err = float(np.max(np.abs(lhs - rhs @ a.T))) if len(holdout) else 0.0
    return {
        "max_error": err,
        "n_points": len(holdout),
        "fit_residual": fitted.fit_residual,
        "alpha": [alpha.a, alpha.b, alpha.f, alpha.d],
    }


def fit_and_verify(
    L: EvenLattice,
    alpha: UnimodularMatrix,
    seed: int = 0,
    n_fit: Optional[int] = None,
    n_holdout: int = 20,
    im_floor: float = WORD_FLOOR,
    rtol: float = WORD_RTOL,
) -> Tuple[TransitionMatrix, dict]:
    """Fit on one deterministic batch, validate on a disjoint batch."""
    m = len(L.cosets)
    n_fit = 2 * m if n_fit is None else n_fit
    fit_pts = adapted_samples(alpha, L.dim, n_fit, seed)
    hold_pts = adapted_samples(alpha, L.dim, n_holdout, seed + 10**6)
    fitted = fit_transition(L, alpha, fit_pts, im_floor, rtol)
    report = verify_relation(L, alpha, hold_pts, fitted, im_floor, rtol)
    return fitted, report


def verify_cocycle(
    L: EvenLattice,
    alpha: UnimodularMatrix,
    beta: UnimodularMatrix,
    seed: int = 0,
    im_floor: float = WORD_FLOOR,
    rtol: float = WORD_RTOL,
) -> dict:
    """Fit A(alpha), A(beta), A(alpha beta) independently and report
    ||A(alpha beta) - A(alpha) A(beta)||_max."""
    fa, _ = fit_and_verify(L, alpha, seed=seed, im_floor=im_floor, rtol=rtol)
    fb, _ = fit_and_verify(L, beta, seed=seed + 1, im_floor=im_floor, rtol=rtol)
    fab, _ = fit_and_verify(L, alpha * beta, seed=seed + 2, im_floor=im_floor, rtol=rtol)
    gap = np.max(np.abs(fab.as_array() - fa.as_array() @ fb.as_array()))
    return {
        "max_error": float(gap),
        "residuals": [fa.fit_residual, fb.fit_residual, fab.fit_residual],
        "alpha": [alpha.a, alpha.b, alpha.f, alpha.d],
        "beta": [beta.a, beta.b, beta.f, beta.d],
    }


def random_words(count: int, max_len: int, seed: int) -> List[List[str]]:
    """Deterministic batch of words over {S, T, T^-1}."""
    rng = np.random.default_rng(seed)
    names = ("S", "T", "T^-1")
    out = []
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        out.append([names[int(k)] for k in rng.integers(0, 3, size=length)])
    return out


def s_matrix_prediction(L: EvenLattice) -> np.ndarray:
    """Closed-form candidate for A(S): |L*/L|^(-1/2) e^(-2 pi i <b_h, b_k>).

    Used as an independent oracle against the fitted matrix; the library
    itself never assumes it.
    """
    cosets = L.cosets
    m = len(cosets)
    scale = 1.0 / math.sqrt(m)
    out = np.empty((m, m), dtype=complex)
    for h, bh in enumerate(cosets):
        for k, bk in enumerate(cosets):
            out[h, k] = scale * cmath.exp(-2j * cmath.pi * float(L.inner(bh, bk)))
    return out


def t_matrix_prediction(L: EvenLattice) -> np.ndarray:
    """Diagonal of phases e^(2 pi i (<b,b>/2 - d/24)) for alpha = T."""
    from .trace import t_phase

    cosets = L.cosets
    out = np.zeros((len(cosets), len(cosets)), dtype=complex)
    for h, bh in enumerate(cosets):
        out[h, h] = t_phase(L, bh)
    return out
