"""Truncated q-expansions and the classical special functions built on them.

Two series containers live here.  `TruncatedSeries` is a Laurent series in
q^(1/denom) with an explicit trust horizon: coefficients at exponents beyond
`guaranteed_order` are unknown, not zero, and every arithmetic operation
propagates that horizon instead of silently pretending exactness.
`BiSeries` is the two-variable analogue in x and q used by the trace
recursion, truncated in both variables.

On top of them sit the evaluators: the Dedekind eta product, the weight-two
Eisenstein series, the two-variable kernel

    P2(q_z, q) = (2 pi i)^2 sum_{n>=1} [ n q_z^n / (1-q^n)
                                         + n q_z^-n q^n / (1-q^n) ],

the Weierstrass elliptic function P2 - G2, and the four half-characteristic
theta functions

    theta_{h,k}(z, tau) = sum_n exp(pi i (n+h)^2 tau + 2 pi i (n+h)(z+k)).

All evaluators treat tau (not the number q) as the underlying variable:
fractional powers of q are computed as exp(2 pi i tau w).  This is what makes
monodromy come out right, e.g. eta(tau+1) = e^{i pi/12} eta(tau); a principal
24th root of q would be periodic instead.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import CutoffTooLarge, ImTooSmall, OutOfAnnulus, PoleAtLatticePoint

TWO_PI_I = 2j * math.pi

# Evaluations refuse tau below this imaginary-part floor rather than
# degrading silently.
IM_TAU_FLOOR = 0.25

# Adaptive truncations run until the certified tail is below this fraction
# of the accumulated magnitude (1e-16 target with a 1e3 safety factor).
TAIL_RTOL = 1e-19

_MAX_TERMS = 200_000


def require_im(tau: complex, floor: float = IM_TAU_FLOOR) -> None:
    if tau.imag < floor:
        raise ImTooSmall(f"Im(tau) = {tau.imag} is below the floor {floor}")


def q_power(tau: complex, exponent) -> complex:
    """exp(2 pi i tau * exponent); exponent may be int, float or Fraction."""
    return cmath.exp(TWO_PI_I * tau * float(exponent))


def _min_or_none(*vals):
    finite = [v for v in vals if v is not None]
    return min(finite) if finite else None


@dataclass(frozen=True)
class TruncatedSeries:
    """Laurent series in q^(1/denom), trusted through guaranteed_order.

    coeffs maps integer keys k to the coefficient of q^(k/denom).  Stored
    keys never exceed guaranteed_order (None meaning the series is known
    exactly at every order, e.g. a polynomial).
    """

    denom: int
    coeffs: dict = field(default_factory=dict)
    guaranteed_order: Optional[int] = None

    def __post_init__(self):
        if self.denom < 1:
            raise ValueError("denom must be a positive integer")
        cleaned = {int(k): complex(v) for k, v in self.coeffs.items() if v != 0}
        if self.guaranteed_order is not None:
            cleaned = {k: v for k, v in cleaned.items() if k <= self.guaranteed_order}
        object.__setattr__(self, "coeffs", cleaned)

    # -- basic views -------------------------------------------------

    @property
    def min_exp(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    @property
    def max_exp(self) -> Optional[int]:
        return max(self.coeffs) if self.coeffs else None

    def coefficient(self, exponent) -> complex:
        """Coefficient at a rational exponent (in q-units, not key units)."""
        key = Fraction(exponent) * self.denom
        if key.denominator != 1:
            return 0j
        return self.coeffs.get(int(key), 0j)

    def is_zero(self) -> bool:
        return not self.coeffs

    @classmethod
    def constant(cls, value) -> "TruncatedSeries":
        return cls(1, {0: complex(value)})

    @classmethod
    def monomial(cls, exponent: Fraction, value=1.0) -> "TruncatedSeries":
        exponent = Fraction(exponent)
        return cls(exponent.denominator, {exponent.numerator: complex(value)})

    # -- denominator lifting -----------------------------------------

    def with_denom(self, denom: int) -> "TruncatedSeries":
        if denom == self.denom:
            return self
        if denom % self.denom != 0:
            raise ValueError(f"cannot lift denom {self.denom} to {denom}")
        s = denom // self.denom
        g = None if self.guaranteed_order is None else self.guaranteed_order * s
        return TruncatedSeries(denom, {k * s: v for k, v in self.coeffs.items()}, g)

    def _aligned(self, other: "TruncatedSeries"):
        d = math.lcm(self.denom, other.denom)
        return self.with_denom(d), other.with_denom(d)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = TruncatedSeries.constant(other)
        a, b = self._aligned(other)
        g = _min_or_none(a.guaranteed_order, b.guaranteed_order)
        out = dict(a.coeffs)
        for k, v in b.coeffs.items():
            out[k] = out.get(k, 0j) + v
        return TruncatedSeries(a.denom, out, g)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries(
            self.denom, {k: -v for k, v in self.coeffs.items()}, self.guaranteed_order
        )

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = TruncatedSeries.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "TruncatedSeries":
        return TruncatedSeries(
            self.denom,
            {k: v * value for k, v in self.coeffs.items()},
            self.guaranteed_order,
        )

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        a, b = self._aligned(other)
        # the product coefficient at e is exact only while every contributing
        # split lands inside both trust horizons
        cands = []
        if a.guaranteed_order is not None:
            cands.append(a.guaranteed_order + (b.min_exp if b.coeffs else 0))
        if b.guaranteed_order is not None:
            cands.append(b.guaranteed_order + (a.min_exp if a.coeffs else 0))
        g = min(cands) if cands else None
        out: dict = {}
        for ka, va in a.coeffs.items():
            for kb, vb in b.coeffs.items():
                k = ka + kb
                if g is None or k <= g:
                    out[k] = out.get(k, 0j) + va * vb
        return TruncatedSeries(a.denom, out, g)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = TruncatedSeries.constant(1.0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n >> 1
            if base_needed:
                base = base * base
            n = base_needed
        return result

    def reciprocal(self, order: Optional[int] = None) -> "TruncatedSeries":
        """Multiplicative inverse by recursive division.

        The leading coefficient must be nonzero.  `order` bounds the number
        of key-steps past the leading exponent to compute; it defaults to
        (and is capped by) what the trust horizon supports.
        """
        if not self.coeffs:
            raise ZeroDivisionError("reciprocal of the zero series")
        k0 = self.min_exp
        c0 = self.coeffs[k0]
        if self.guaranteed_order is not None:
            available = self.guaranteed_order - k0
            order = available if order is None else min(order, available)
        if order is None:
            raise ValueError("reciprocal of an exact series needs an explicit order")
        if order > 10**6:
            raise CutoffTooLarge(f"reciprocal order {order} exceeds the desk-scale cap")
        inv = {-k0: 1.0 / c0}
        for e in range(1, order + 1):
            acc = 0j
            for i in range(1, e + 1):
                ai = self.coeffs.get(k0 + i)
                if ai is not None:
                    bj = inv.get(-k0 + e - i)
                    if bj is not None:
                        acc += ai * bj
            if acc != 0:
                inv[-k0 + e] = -acc / c0
        return TruncatedSeries(self.denom, inv, -k0 + order)

    def truncate(self, guaranteed_order: int) -> "TruncatedSeries":
        g = _min_or_none(self.guaranteed_order, guaranteed_order)
        return TruncatedSeries(self.denom, self.coeffs, g)

    # -- evaluation ---------------------------------------------------

    def eval_tau(self, tau: complex) -> complex:
        """Sum the stored terms at q = exp(2 pi i tau), branch-correctly."""
        return sum(
            v * q_power(tau, Fraction(k, self.denom)) for k, v in self.coeffs.items()
        )

    def __repr__(self):
        n = len(self.coeffs)
        return (
            f"TruncatedSeries(denom={self.denom}, {n} terms, "
            f"guaranteed_order={self.guaranteed_order})"
        )


@dataclass(frozen=True)
class BiSeries:
    """Series in x and q, truncated in both variables.

    coeffs maps (j, m) to the coefficient of x^j q^(m/q_denom).  Coefficients
    are trusted for x_min <= j <= x_max and m <= q_order; outside that window
    they are unknown.  x_exact marks series whose true x-support equals the
    stored one (e.g. an x-independent character), which widens what products
    can be trusted.
    """

    x_min: int
    x_max: int
    q_order: int
    coeffs: dict = field(default_factory=dict)
    q_denom: int = 1
    x_exact: bool = False

    def __post_init__(self):
        cleaned = {}
        for (j, m), v in self.coeffs.items():
            if v == 0:
                continue
            if m > self.q_order:
                continue
            if not self.x_exact and not (self.x_min <= j <= self.x_max):
                continue
            cleaned[(int(j), int(m))] = complex(v)
        object.__setattr__(self, "coeffs", cleaned)

    def coefficient(self, j: int, q_exponent) -> complex:
        key = Fraction(q_exponent) * self.q_denom
        if key.denominator != 1:
            return 0j
        return self.coeffs.get((j, int(key)), 0j)

    def with_q_denom(self, q_denom: int) -> "BiSeries":
        if q_denom == self.q_denom:
            return self
        if q_denom % self.q_denom != 0:
            raise ValueError(f"cannot lift q_denom {self.q_denom} to {q_denom}")
        s = q_denom // self.q_denom
        return BiSeries(
            self.x_min,
            self.x_max,
            self.q_order * s,
            {(j, m * s): v for (j, m), v in self.coeffs.items()},
            q_denom,
            self.x_exact,
        )

    def _aligned(self, other: "BiSeries"):
        d = math.lcm(self.q_denom, other.q_denom)
        return self.with_q_denom(d), other.with_q_denom(d)

    def __add__(self, other: "BiSeries") -> "BiSeries":
        a, b = self._aligned(other)
        out = dict(a.coeffs)
        for k, v in b.coeffs.items():
            out[k] = out.get(k, 0j) + v
        # An x-exact summand is known at every x-degree, so it never narrows
        # the other side's window; two truncated windows intersect.
        if a.x_exact and b.x_exact:
            x_lo, x_hi = min(a.x_min, b.x_min), max(a.x_max, b.x_max)
        elif a.x_exact:
            x_lo, x_hi = b.x_min, b.x_max
        elif b.x_exact:
            x_lo, x_hi = a.x_min, a.x_max
        else:
            x_lo, x_hi = max(a.x_min, b.x_min), min(a.x_max, b.x_max)
        return BiSeries(
            x_lo,
            x_hi,
            min(a.q_order, b.q_order),
            out,
            a.q_denom,
            a.x_exact and b.x_exact,
        )

    def __neg__(self):
        return BiSeries(
            self.x_min,
            self.x_max,
            self.q_order,
            {k: -v for k, v in self.coeffs.items()},
            self.q_denom,
            self.x_exact,
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value) -> "BiSeries":
        return BiSeries(
            self.x_min,
            self.x_max,
            self.q_order,
            {k: v * value for k, v in self.coeffs.items()},
            self.q_denom,
            self.x_exact,
        )

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        a, b = self._aligned(other)
        if not (a.x_exact or b.x_exact):
            raise ValueError(
                "product of two x-truncated BiSeries has no trustworthy x-window; "
                "one factor must be x-exact"
            )
        qa_min = min((m for (_, m) in a.coeffs), default=0)
        qb_min = min((m for (_, m) in b.coeffs), default=0)
        q_g = min(a.q_order + qb_min, b.q_order + qa_min)
        x_min = a.x_min + b.x_min
        x_max = a.x_max + b.x_max
        out: dict = {}
        for (ja, ma), va in a.coeffs.items():
            for (jb, mb), vb in b.coeffs.items():
                key = (ja + jb, ma + mb)
                if key[1] <= q_g and x_min <= key[0] <= x_max:
                    out[key] = out.get(key, 0j) + va * vb
        return BiSeries(x_min, x_max, q_g, out, a.q_denom, a.x_exact and b.x_exact)

    __rmul__ = __mul__

    def max_abs_diff(self, other: "BiSeries") -> float:
        """Largest coefficient discrepancy on the common trusted window."""
        a, b = self._aligned(other)
        x_lo, x_hi = max(a.x_min, b.x_min), min(a.x_max, b.x_max)
        q_hi = min(a.q_order, b.q_order)
        keys = set(a.coeffs) | set(b.coeffs)
        worst = 0.0
        for (j, m) in keys:
            if x_lo <= j <= x_hi and m <= q_hi:
                worst = max(worst, abs(a.coeffs.get((j, m), 0j) - b.coeffs.get((j, m), 0j)))
        return worst

    def eval_at(self, x: complex, tau: complex) -> complex:
        return sum(
            v * x**j * q_power(tau, Fraction(m, self.q_denom))
            for (j, m), v in self.coeffs.items()
        )

    def __repr__(self):
        return (
            f"BiSeries(x in [{self.x_min},{self.x_max}], q_order={self.q_order}"
            f"/{self.q_denom}, {len(self.coeffs)} terms)"
        )


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------


def _adaptive_order(abs_q: float, rtol: float = TAIL_RTOL) -> int:
    """Smallest N with |q|^N below rtol (plus a fixed pad)."""
    if abs_q >= 1.0:
        raise ImTooSmall("q is not inside the unit disc")
    return max(4, math.ceil(math.log(rtol) / math.log(abs_q))) + 4


def dedekind_eta(order: int) -> TruncatedSeries:
    """q-expansion of eta = q^(1/24) prod (1-q^n), exact through q^order.

    Sparse by the pentagonal number theorem: the product expands as
    sum_k (-1)^k q^(k(3k-1)/2).
    """
    if order > 10**6:
        raise CutoffTooLarge(f"eta expansion order {order} exceeds the cap")
    coeffs = {}
    k = 0
    while True:
        hit = False
        for kk in (k, -k) if k else (0,):
            g = kk * (3 * kk - 1) // 2
            if g <= order:
                coeffs[24 * g + 1] = coeffs.get(24 * g + 1, 0) + (-1) ** (kk % 2)
                hit = True
        if not hit:
            break
        k += 1
    return TruncatedSeries(24, coeffs, 24 * order + 1)


def eta_eval(tau: complex, im_floor: float = IM_TAU_FLOOR) -> complex:
    require_im(tau, im_floor)
    q = q_power(tau, 1)
    n_max = _adaptive_order(abs(q))
    prod = 1.0 + 0j
    qn = 1.0 + 0j
    for _ in range(n_max):
        qn *= q
        prod *= 1.0 - qn
    return q_power(tau, Fraction(1, 24)) * prod


def _sigma1_table(order: int) -> list:
    sig = [0] * (order + 1)
    for d in range(1, order + 1):
        for n in range(d, order + 1, d):
            sig[n] += d
    return sig


def eisenstein_g2(order: int) -> TruncatedSeries:
    """Weight-two Eisenstein series: pi^2/3 - 8 pi^2 sum sigma_1(n) q^n.

    The constant term is 2 zeta(2).  This normalization is the one that
    satisfies G2((a tau + b)/(f tau + d)) = (f tau + d)^2 G2(tau)
    - 2 pi i f (f tau + d), and in particular G2(i) = pi.
    """
    if order > 10**6:
        raise CutoffTooLarge(f"G2 expansion order {order} exceeds the cap")
    sig = _sigma1_table(order)
    coeffs = {0: math.pi**2 / 3}
    for n in range(1, order + 1):
        coeffs[n] = -8 * math.pi**2 * sig[n]
    return TruncatedSeries(1, coeffs, order)


def g2_eval(tau: complex, im_floor: float = IM_TAU_FLOOR) -> complex:
    require_im(tau, im_floor)
    q = q_power(tau, 1)
    aq = abs(q)
    # sigma_1(n) < n^2, so pad the plain adaptive order until n^2 |q|^n dies
    n_max = _adaptive_order(aq)
    while n_max**2 * aq**n_max > TAIL_RTOL and n_max < _MAX_TERMS:
        n_max *= 2
    sig = _sigma1_table(n_max)
    acc = 0j
    qn = 1.0 + 0j
    for n in range(1, n_max + 1):
        qn *= q
        acc += sig[n] * qn
    return math.pi**2 / 3 - 8 * math.pi**2 * acc


def p2_eval(z: complex, tau: complex, im_floor: float = IM_TAU_FLOOR) -> complex:
    """The two-variable kernel at q_z = e^{2 pi i z}, q = e^{2 pi i tau}.

    Geometric resummation over q-shells:

        P2/(2 pi i)^2 = s(q_z) + sum_{i>=1} [ s(q_z q^i) + s(q_z^{-1} q^i) ],
        s(w) = w/(1-w)^2,

    which converges exactly on the annulus |q| < |q_z| < 1/|q| and is what
    the direct double sum rearranges to.
    """
    require_im(tau, im_floor)
    q = q_power(tau, 1)
    qz = cmath.exp(TWO_PI_I * z)
    ratio = max(abs(q * qz), abs(q / qz))
    if ratio >= 0.999:
        raise OutOfAnnulus(
            f"|q_z| = {abs(qz):.6g} is outside (or too close to the edge of) "
            f"the annulus |q| < |q_z| < 1/|q| with |q| = {abs(q):.6g}"
        )

    def s(w: complex) -> complex:
        return w / (1.0 - w) ** 2

    acc = s(qz)
    w_up, w_dn = qz, 1.0 / qz
    for i in range(1, _MAX_TERMS):
        w_up *= q
        w_dn *= q
        term = s(w_up) + s(w_dn)
        acc += term
        # certified geometric tail: |s(w)| <= |w|/(1-|w|)^2 and the shell
        # magnitudes shrink by |q| each step
        biggest = max(abs(w_up), abs(w_dn))
        tail = 2 * (biggest * abs(q)) / (1.0 - ratio) ** 2 / (1.0 - abs(q))
        if tail < TAIL_RTOL * max(1.0, abs(acc)):
            break
    else:
        raise OutOfAnnulus("q-shell resummation did not converge within the term cap")
    return TWO_PI_I**2 * acc


def p2_series(x_span: int, q_order: int) -> BiSeries:
    """Window of the kernel as a BiSeries: coefficient of x^n q^(ni) is
    (2 pi i)^2 n for n in [1, x_span], i >= 0, and the mirror x^(-n) q^(ni)
    for i >= 1."""
    if x_span < 1 or q_order < 0:
        raise ValueError("need x_span >= 1 and q_order >= 0")
    if x_span * q_order > 10**7:
        raise CutoffTooLarge("requested kernel window exceeds the cap")
    w = TWO_PI_I**2
    coeffs = {}
    for n in range(1, x_span + 1):
        i = 0
        while n * i <= q_order:
            coeffs[(n, n * i)] = w * n
            if i > 0:
                coeffs[(-n, n * i)] = w * n
            i += 1
    return BiSeries(-x_span, x_span, q_order, coeffs, 1, False)


def weierstrass_p(
    z: complex, tau: complex, im_floor: float = IM_TAU_FLOOR, pole_radius: float = 1e-8
) -> complex:
    """Weierstrass elliptic function for the lattice Z tau + Z.

    Computed as P2(z, tau) - G2(tau) after reducing z into the fundamental
    cell by periodicity; z within pole_radius of a lattice point is refused.
    """
    require_im(tau, im_floor)
    m = round(z.imag / tau.imag)
    z_red = z - m * tau
    z_red -= round(z_red.real)
    dist = min(
        abs(z_red - (a * tau + b)) for a in (-1, 0, 1) for b in (-1, 0, 1)
    )
    if dist < pole_radius:
        raise PoleAtLatticePoint(f"z = {z} is within {pole_radius} of a lattice point")
    return p2_eval(z_red, tau, im_floor) - g2_eval(tau, im_floor)


_HALF = Fraction(1, 2)
_VALID_CHARS = (Fraction(0), _HALF)


def _check_char(h) -> Fraction:
    hf = Fraction(h)
    if hf not in _VALID_CHARS:
        raise ValueError(f"characteristic {h} is not 0 or 1/2")
    return hf


def jacobi_theta(h, k, z: complex, tau: complex, im_floor: float = IM_TAU_FLOOR) -> complex:
    """theta_{h,k}(z, tau) = sum_n exp(pi i (n+h)^2 tau + 2 pi i (n+h)(z+k))
    for half-integer characteristics h, k in {0, 1/2}."""
    hf, kf = _check_char(h), _check_char(k)
    require_im(tau, im_floor)
    # Gaussian tail: |term| = exp(-pi (n+h)^2 Im tau - 2 pi (n+h) Im z)
    L = -math.log(TAIL_RTOL) + 5
    b = abs(z.imag)
    n_max = math.ceil((b + math.sqrt(b * b + tau.imag * L / math.pi)) / tau.imag) + 3
    acc = 0j
    hF, kF = float(hf), float(kf)
    for n in range(-n_max, n_max + 1):
        a = n + hF
        acc += cmath.exp(1j * math.pi * a * a * tau + TWO_PI_I * a * (z + kF))
    return acc


def theta_s_constant(h, k) -> complex:
    """Constant c in theta_{h,k}(z/tau, -1/tau) = c (-i tau)^{1/2}
    exp(pi i z^2 / tau) theta_{k,h}(z, tau).

    Equals exp(-2 pi i h k): trivial except for the odd-odd characteristic,
    where it is -i (verified by Poisson summation and direct numerics).
    """
    hf, kf = _check_char(h), _check_char(k)
    return cmath.exp(-TWO_PI_I * float(hf * kf))
