"""The harmonic polynomial pair (P_n, Q_n) and its derivative jets.

P_n and Q_n are the even/odd binomial splits of the expansion of
(u + i v)^n, so three independent evaluation routes exist and are kept
side by side as mutual oracles:

* ``eval_direct``      -- term-by-term summation, exact integer binomial
                          coefficients, exact rational accumulation,
* ``eval_recurrence``  -- the first-order recurrence
                          P_k = u P_{k-1} - v Q_{k-1},
                          Q_k = v P_{k-1} + u Q_{k-1},
* ``eval_complex_power`` -- repeated complex multiplication.

The recurrence is the default hot path (one complex multiply per
degree, well conditioned on the tested ranges); direct summation is
retained as the reference. All derivatives come from the closed
derivative rules (d/du P_n = n P_{n-1} and friends), never from
symbolic differentiation or finite differences.

Binomial coefficients are computed in arbitrary-width integer
arithmetic and converted to float once, which keeps the coefficient
construction exact for every degree this package accepts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "PQValue",
    "PQJet",
    "eval_direct",
    "eval_recurrence",
    "eval_complex_power",
    "jet",
    "binomial_identity_holds",
]


@dataclass(frozen=True)
class PQValue:
    """Value of the pair at one parameter point."""

    degree: int
    p: float
    q: float


@dataclass(frozen=True)
class PQJet:
    """Value plus first and second partials at one parameter point."""

    degree: int
    p: float
    q: float
    p_u: float
    p_v: float
    q_u: float
    q_v: float
    p_uu: float
    p_uv: float
    p_vv: float
    q_uu: float
    q_uv: float
    q_vv: float


def _check_degree(n: int) -> int:
    if not isinstance(n, int):
        raise TypeError(f"degree must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"degree must be >= 0, got {n}")
    return n


def _check_point(u: float, v: float) -> tuple[float, float]:
    u = float(u)
    v = float(v)
    if not (math.isfinite(u) and math.isfinite(v)):
        raise ValueError(f"parameter point must be finite, got ({u}, {v})")
    return u, v


def eval_direct(n: int, u: float, v: float) -> PQValue:
    """Evaluate (P_n, Q_n) by direct summation of the defining series.

    P_n sums (-1)^k C(n, 2k) u^(n-2k) v^(2k) for k = 0..ceil((n-1)/2);
    Q_n sums (-1)^k C(n, 2k+1) u^(n-2k-1) v^(2k+1) for
    k = 0..floor((n-1)/2), the empty sum giving Q_0 = 0.

    Every float is a dyadic rational, so the sum is accumulated in exact
    rational arithmetic and rounded to float once at the end; the series
    cancels catastrophically at high degree, and a float-term sum would
    not reach reference accuracy there.
    """
    n = _check_degree(n)
    u, v = _check_point(u, v)
    ur, vr = Fraction(u), Fraction(v)
    p = Fraction(0)
    for k in range(math.ceil((n - 1) / 2) + 1):
        term = math.comb(n, 2 * k) * ur ** (n - 2 * k) * vr ** (2 * k)
        p = p + term if k % 2 == 0 else p - term
    q = Fraction(0)
    for k in range(math.floor((n - 1) / 2) + 1):
        term = math.comb(n, 2 * k + 1) * ur ** (n - 2 * k - 1) * vr ** (2 * k + 1)
        q = q + term if k % 2 == 0 else q - term
    return PQValue(n, float(p), float(q))


def eval_recurrence(n: int, u: float, v: float) -> list[PQValue]:
    """Evaluate all degrees 0..n through the first-order recurrence."""
    n = _check_degree(n)
    u, v = _check_point(u, v)
    out = [PQValue(0, 1.0, 0.0)]
    p, q = 1.0, 0.0
    for k in range(1, n + 1):
        p, q = u * p - v * q, v * p + u * q
        out.append(PQValue(k, p, q))
    return out


def eval_complex_power(n: int, u: float, v: float) -> PQValue:
    """Evaluate via repeated complex multiplication of (u + i v)."""
    n = _check_degree(n)
    u, v = _check_point(u, v)
    w = complex(u, v)
    acc = complex(1.0, 0.0)
    for _ in range(n):
        acc *= w
    return PQValue(n, acc.real, acc.imag)


def jet(n: int, u: float, v: float) -> PQJet:
    """Value and partials of (P_n, Q_n), assembled from lower degrees.

    First partials use d/du P_n = n P_{n-1}, d/dv P_n = -n Q_{n-1},
    d/du Q_n = n Q_{n-1}, d/dv Q_n = n P_{n-1}; second partials apply
    the same rules once more, which forces p_uu + p_vv = 0 exactly.
    """
    n = _check_degree(n)
    u, v = _check_point(u, v)
    seq = eval_recurrence(n, u, v)
    p, q = seq[n].p, seq[n].q
    p1 = seq[n - 1].p if n >= 1 else 0.0
    q1 = seq[n - 1].q if n >= 1 else 0.0
    p2 = seq[n - 2].p if n >= 2 else 0.0
    q2 = seq[n - 2].q if n >= 2 else 0.0
    c1 = float(n)
    c2 = float(n * (n - 1))
    p_uu = c2 * p2
    q_uu = c2 * q2
    return PQJet(
        degree=n,
        p=p,
        q=q,
        p_u=c1 * p1,
        p_v=-(c1 * q1),
        q_u=c1 * q1,
        q_v=c1 * p1,
        p_uu=p_uu,
        p_uv=-(c2 * q2),
        p_vv=-p_uu,
        q_uu=q_uu,
        q_uv=c2 * p2,
        q_vv=-q_uu,
    )


def binomial_identity_holds(n: int, k: int) -> bool:
    """Check C(n, 2k) + C(n, 2k+1) == C(n+1, 2k+1) in exact integers."""
    n = _check_degree(n)
    if not isinstance(k, int):
        raise TypeError(f"k must be an integer, got {type(k).__name__}")
    if k < 0 or 2 * k + 1 > n + 1:
        raise ValueError(f"k out of range for n={n}: need 0 <= k and 2k+1 <= n+1")
    return math.comb(n, 2 * k) + math.comb(n, 2 * k + 1) == math.comb(n + 1, 2 * k + 1)
