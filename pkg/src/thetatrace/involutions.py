"""Exact combinatorics of involutions in the symmetric group.

Everything here is integer or rational arithmetic: enumeration of
involutions, counts by number of fixed points, ordered decompositions into
disjoint transpositions-products, the alternating-sign sum over those
decompositions, and the regrouping identity that packages all of it into an
exponential.  No floats enter this module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Dict, List, Sequence, Tuple

from .errors import BoundTooLarge, NTooLarge, ParityMismatch

N_CAP = 12


@dataclass(frozen=True)
class Involution:
    """A self-inverse permutation of {1..n}, stored as its set of 2-cycles.

    pairs is a sorted tuple of (i, j) with i < j; every element not in a
    pair is fixed.
    """

    n: int
    pairs: tuple = ()

    def __post_init__(self):
        norm = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        object.__setattr__(self, "pairs", norm)
        seen = set()
        for i, j in norm:
            if not (1 <= i < j <= self.n):
                raise ValueError(f"pair ({i},{j}) out of range for n={self.n}")
            if i in seen or j in seen:
                raise ValueError("pairs are not disjoint")
            seen.update((i, j))

    @property
    def is_identity(self) -> bool:
        return not self.pairs

    def moved(self) -> tuple:
        return tuple(sorted(x for p in self.pairs for x in p))

    def fixed(self) -> tuple:
        m = set(self.moved())
        return tuple(x for x in range(1, self.n + 1) if x not in m)

    def mapping(self) -> tuple:
        """Images (sigma(1), ..., sigma(n)) as a plain permutation."""
        img = list(range(1, self.n + 1))
        for i, j in self.pairs:
            img[i - 1], img[j - 1] = j, i
        return tuple(img)


@lru_cache(maxsize=None)
def _all_involutions(n: int) -> tuple:
    out: List[Involution] = []

    def rec(avail: Tuple[int, ...], pairs):
        if not avail:
            out.append(Involution(n, tuple(pairs)))
            return
        first, rest = avail[0], avail[1:]
        rec(rest, pairs)  # fix first
        for k, other in enumerate(rest):
            rec(rest[:k] + rest[k + 1 :], pairs + [(first, other)])

    rec(tuple(range(1, n + 1)), [])
    return tuple(out)


def list_involutions(n: int) -> List[Involution]:
    """All involutions of {1..n}, identity included, duplicate-free."""
    if not (1 <= n <= N_CAP):
        raise NTooLarge(f"need 1 <= n <= {N_CAP}, got {n}")
    return list(_all_involutions(n))


def count_with_fixed(n: int, r: int) -> int:
    """Number of involutions of {1..n} with exactly r fixed points, counted
    by enumeration."""
    if (n - r) % 2 != 0 or not (0 <= r <= n):
        raise ParityMismatch(f"no involutions of {n} elements fix exactly {r}")
    return sum(1 for s in list_involutions(n) if len(s.fixed()) == r)


def closed_form_fixed_count(p: int, r: int) -> int:
    """C(2p+r, r) * (2p)!/(p! 2^p): choose the fixed set, then pair the rest."""
    return math.comb(2 * p + r, r) * math.factorial(2 * p) // (
        math.factorial(p) * 2**p
    )


def _unordered_partitions(items: Sequence):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _unordered_partitions(rest):
        for k in range(len(part)):
            yield part[:k] + [part[k] + [first]] + part[k + 1 :]
        yield part + [[first]]


def _ordered_set_partitions(items: Sequence):
    """All ordered sequences of disjoint nonempty blocks covering items.

    Blocks of a partition are pairwise distinct, so ordering them is a plain
    permutation with no duplicate sequences.
    """
    for part in _unordered_partitions(items):
        for perm in permutations(part):
            yield tuple(tuple(b) for b in perm)


def enumerate_decompositions(sigma: Involution) -> List[Tuple[Involution, ...]]:
    """All ordered sequences of disjoint non-identity involutions whose
    product is sigma; equivalently ordered set-partitions of its pair set."""
    if sigma.is_identity:
        raise ValueError("the identity has no nonempty decompositions")
    if len(sigma.moved()) > N_CAP:
        raise NTooLarge(f"moved set larger than {N_CAP}")
    out = []
    for blocks in _ordered_set_partitions(sigma.pairs):
        out.append(tuple(Involution(sigma.n, b) for b in blocks))
    return out


def decomposition_is_valid(sigma: Involution, parts: Sequence[Involution]) -> bool:
    """Disjointness plus an honest permutation-composition product check."""
    moved = [set(p.moved()) for p in parts]
    for i in range(len(moved)):
        for j in range(i + 1, len(moved)):
            if moved[i] & moved[j]:
                return False
    if any(p.is_identity for p in parts):
        return False
    composite = list(range(1, sigma.n + 1))
    for p in reversed(parts):
        m = p.mapping()
        composite = [m[x - 1] for x in composite]
    return tuple(composite) == sigma.mapping()


def verify_sign_lemma(sigma: Involution) -> bool:
    """sum over ordered decompositions of (-1)^(number of parts) = (-1)^p,
    where sigma moves 2p points.

    The operator products attached to a decomposition coincide for every
    decomposition of the same sigma (disjoint factors multiply to the same
    total), so the operator identity reduces to this signed count.
    """
    p = len(sigma.pairs)
    total = sum((-1) ** len(parts) for parts in enumerate_decompositions(sigma))
    return total == (-1) ** p


def verify_multinomial_identity(p: int, r: int) -> bool:
    """Exact rational identity behind the regrouping step:

    (1/(r+2p)!) C(r+2p, r) (2p)!/(p! 2^p)  ==  (1/(r+p)!) C(r+p, r) / 2^p,

    both sides being 1/(r! p! 2^p).
    """
    if min(p, r) < 0:
        raise ValueError("p and r must be nonnegative")
    lhs = (
        Fraction(1, math.factorial(r + 2 * p))
        * math.comb(r + 2 * p, r)
        * Fraction(math.factorial(2 * p), math.factorial(p) * 2**p)
    )
    rhs = (
        Fraction(1, math.factorial(r + p))
        * math.comb(r + p, r)
        * Fraction(1, 2**p)
    )
    return lhs == rhs == Fraction(1, math.factorial(r) * math.factorial(p) * 2**p)


def exponential_regroup_check(p_max: int, r_max: int) -> dict:
    """Check the regrouping of the involution sum into an exponential.

    In commuting formal variables c and X, compare

        sum_n (1/n!) sum_{sigma in I(n)} c^(pairs) X^(fixed)
            ==  exp(c/2 + X),

    as exact rationals on every monomial c^p X^r with p <= p_max and
    r <= r_max.  The coefficient on the left receives contributions only
    from n = 2p + r; it is taken from literal enumeration while n <= 12 and
    from the pairing count C(n,r)(2p)!/(p! 2^p) beyond that (the two are
    checked equal on the overlap).
    """
    if not (0 <= p_max <= 20 and 0 <= r_max <= 20):
        raise BoundTooLarge("regroup bounds must lie in [0, 20]")
    by_shape: Dict[int, Dict[int, int]] = {}
    for n in range(1, N_CAP + 1):
        tally: Dict[int, int] = {}
        for s in list_involutions(n):
            p = len(s.pairs)
            tally[p] = tally.get(p, 0) + 1
        by_shape[n] = tally

    worst_term = None
    checked = 0
    for p in range(p_max + 1):
        for r in range(r_max + 1):
            n = 2 * p + r
            count = closed_form_fixed_count(p, r)
            if 1 <= n <= N_CAP:
                enum = by_shape[n].get(p, 0)
                if enum != count:
                    return {
                        "equal": False,
                        "first_mismatch": {"p": p, "r": r, "enumerated": enum, "closed_form": count},
                    }
            lhs = Fraction(count, math.factorial(n))
            rhs = Fraction(1, math.factorial(p) * 2**p) * Fraction(1, math.factorial(r))
            checked += 1
            if lhs != rhs:
                return {"equal": False, "first_mismatch": {"p": p, "r": r}}
    return {
        "equal": True,
        "p_max": p_max,
        "r_max": r_max,
        "terms_checked": checked,
        "enumerated_through": N_CAP,
    }
