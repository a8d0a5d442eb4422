"""The function m(q, e): the least number of powers of q whose sum is
divisible by e.

Three independent general algorithms are provided (set-layering BFS on Z/e,
digit-sum scan over multiples of e, and the residue-sum formula working
entirely modulo z), plus a catalogue of closed-form fast paths and the
classification of the pairs with m >= e/3.  The general algorithms serve as
oracles for one another and for every closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .arith import (
    digit_sum,
    divisors,
    euler_phi,
    is_pierpont_prime,
    is_prime,
    mult_order,
    prime_power_base,
    qadic_expand,
)
from .errors import CapacityError, DomainError

BFS_CAPACITY = 1 << 31
_BFS_NUMPY_MIN = 4096  # below this a plain dict BFS is faster


@dataclass(frozen=True)
class MResult:
    """Value of m(q, e) with provenance.

    witness, when present, is a sorted multiset of exponents i with
    sum(q**i) divisible by e and exactly m terms.  k_min records the
    multiple of e attaining the minimal digit sum, for the scanning methods.
    """

    m: int
    method: str
    witness: tuple[int, ...] | None = None
    k_min: int | None = None
    rule_id: str | None = None


@dataclass(frozen=True)
class LargeMCase:
    """Classification of pairs with m(q, e) >= e/3: one of four shapes
    (halving family, two thirds families, or a finite residue table), or
    none."""

    case_id: str  # "I", "II", "III", "IV" or "none"
    certified_m: int | None = None


# (q mod e, e) -> m for the finitely many sporadic pairs with m >= e/3.
_LARGE_M_TABLE = {
    (2, 3): 2, (2, 5): 2, (2, 7): 3,
    (3, 5): 2, (3, 8): 4,
    (4, 5): 2, (4, 7): 3, (4, 15): 6,
    (5, 24): 8,
}


def _require_coprime(q: int, e: int) -> None:
    if e < 1:
        raise DomainError(f"e must be >= 1, got {e}")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if gcd(q, e) != 1:
        raise DomainError(f"q and e must be coprime, got q={q}, e={e}")


def _powers_mod(q: int, e: int) -> tuple[list[int], list[int]]:
    """Distinct residues of q^i mod e with the smallest exponent realizing
    each, in exponent order."""
    residues = []
    exps = []
    seen = set()
    r = 1 % e
    i = 0
    while r not in seen:
        seen.add(r)
        residues.append(r)
        exps.append(i)
        r = r * q % e
        i += 1
    return residues, exps


def m_bfs(q: int, e: int) -> MResult:
    """Layered reachability on Z/e: layer t holds all residues expressible
    as a sum of t powers of q; m is the first layer containing 0.  A witness
    is reconstructed from per-residue parent pointers."""
    _require_coprime(q, e)
    if e > BFS_CAPACITY:
        raise CapacityError(
            f"e={e} exceeds the BFS table capacity {BFS_CAPACITY}; "
            "use the residue method with (q, n, z)"
        )
    if e == 1:
        return MResult(m=1, method="bfs", witness=(0,))
    powers, exps = _powers_mod(q, e)
    if e < _BFS_NUMPY_MIN:
        return _m_bfs_small(q, e, powers, exps)
    return _m_bfs_numpy(q, e, powers, exps)


def _m_bfs_small(q, e, powers, exps):
    dist = {}
    parent = {}
    frontier = []
    for r, i in zip(powers, exps):
        if r not in dist:
            dist[r] = 1
            parent[r] = i
            frontier.append(r)
    t = 1
    while 0 not in dist:
        t += 1
        if t > e:
            raise AssertionError(f"BFS did not terminate for q={q}, e={e}")
        new = []
        for r in sorted(frontier):
            for s, i in zip(powers, exps):
                v = (r + s) % e
                if v not in dist:
                    dist[v] = t
                    parent[v] = i
                    new.append(v)
        frontier = new
    m = dist[0]
    out = []
    r = 0
    for _ in range(m):
        i = parent[r]
        out.append(i)
        r = (r - pow(q, i, e)) % e
    return MResult(m=m, method="bfs", witness=tuple(sorted(out)))


def _m_bfs_numpy(q, e, powers, exps):
    s1 = np.array(powers, dtype=np.int64)
    s1_exp = np.array(exps, dtype=np.int64)
    dist = np.full(e, -1, dtype=np.int32)
    par = np.full(e, -1, dtype=np.int32)
    dist[s1] = 1
    par[s1] = s1_exp
    frontier = np.unique(s1)
    t = 1
    chunk = max(1, (1 << 22) // len(powers))
    while dist[0] < 0:
        t += 1
        if t > e:
            raise AssertionError(f"BFS did not terminate for q={q}, e={e}")
        new_parts = []
        for lo in range(0, len(frontier), chunk):
            block = frontier[lo:lo + chunk]
            cand = (block[:, None] + s1[None, :]) % e
            flat = cand.ravel()
            fresh = dist[flat] < 0
            if not fresh.any():
                continue
            flat = flat[fresh]
            pidx = np.broadcast_to(s1_exp, cand.shape).ravel()[fresh]
            uniq, first = np.unique(flat, return_index=True)
            still = dist[uniq] < 0  # earlier chunks may have claimed some
            uniq = uniq[still]
            first = first[still]
            dist[uniq] = t
            par[uniq] = pidx[first]
            new_parts.append(uniq)
        if not new_parts:
            raise AssertionError(f"BFS stalled before reaching 0 (q={q}, e={e})")
        frontier = np.unique(np.concatenate(new_parts))
    m = int(dist[0])
    out = []
    r = 0
    for _ in range(m):
        i = int(par[r])
        out.append(i)
        r = (r - pow(q, i, e)) % e
    return MResult(m=m, method="bfs", witness=tuple(sorted(out)))


def m_digit_scan(q: int, n: int, e: int) -> MResult:
    """Minimum base-q digit sum of k*e over k = 1..z, z = (q^n - 1)/e.

    Works in full-width exact arithmetic; kept as an independent oracle for
    the residue method.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    top = q**n - 1
    if e < 1 or top % e:
        raise DomainError(f"e={e} does not divide q^n - 1 = {top}")
    z = top // e
    best = None
    best_k = None
    for k in range(1, z + 1):
        s = digit_sum(k * e, q)
        if best is None or s < best:
            best, best_k = s, k
    digits = qadic_expand(best_k * e, q)
    witness = tuple(sorted(i for i, d in enumerate(digits) for _ in range(d)))
    return MResult(m=best, method="digit_scan", witness=witness, k_min=best_k)


def m_via_z(q: int, n: int, z: int) -> MResult:
    """m from residues modulo z alone: the digit sum of k*e equals
    (q-1)/z * (n/ord_z(q)) * (orbit residue sum of k), so the minimum over
    1 <= k < z never touches e itself."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if z < 1:
        raise DomainError(f"z must be >= 1, got {z}")
    if pow(q, n, z) != 1 % z:
        raise DomainError(f"q^n is not 1 modulo z (q={q}, n={n}, z={z})")
    if z == 1:
        return MResult(m=n * (q - 1), method="residue_formula", k_min=1)
    nu = mult_order(q % z, z)
    pw = np.array([pow(q, i, z) for i in range(1, nu + 1)], dtype=np.int64)
    best = None
    best_k = None
    rows = max(1, (1 << 22) // nu)
    for lo in range(1, z, rows):
        ks = np.arange(lo, min(lo + rows, z), dtype=np.int64)
        sums = (ks[:, None] * pw[None, :] % z).sum(axis=1)
        idx = int(sums.argmin())
        if best is None or sums[idx] < best:
            best = int(sums[idx])
            best_k = int(ks[idx])
    total = (q - 1) * (n // nu) * best
    m, rem = divmod(total, z)
    if rem:
        raise AssertionError("digit-sum formula did not divide evenly")
    digits = exponent_digits(q, n, z, best_k)
    witness = tuple(sorted(i for i, d in enumerate(digits) for _ in range(d)))
    return MResult(m=m, method="residue_formula", witness=witness, k_min=best_k)


def exponent_digits(q: int, n: int, z: int, k: int) -> list[int]:
    """Base-q digits of k*e (LSB first, length n), where e = (q^n - 1)/z,
    computed without forming k*e: the digit of q^(i-1) is
    floor((k*q^(n-i) mod z) * q / z)."""
    if not 0 <= k <= z:
        raise DomainError(f"k must lie in 0..z, got k={k}, z={z}")
    if k == z:  # z*e = q^n - 1 has the all-maximal expansion
        return [q - 1] * n
    if z == 1:
        return [0] * n
    digits = []
    for i in range(1, n + 1):  # i = 1 yields the q^0 digit
        c = k * pow(q, n - i, z) % z
        digits.append(c * q // z)
    return digits


def m_value(q: int, e: int) -> MResult:
    """Dispatch: closed form when one applies, otherwise BFS."""
    closed = m_closed_form(q, e)
    if closed is not None:
        return closed
    return m_bfs(q, e)


# ---------------------------------------------------------------------------
# Closed forms.  Rules run in a fixed order, most specific first; every rule
# whose hypothesis holds is computed and all firing rules must agree -- a
# disagreement is an implementation bug, never resolved silently.
# ---------------------------------------------------------------------------

def _prime_power_or_none(n):
    # A rule whose hypothesis cannot be certified (primality undecidable
    # beyond 64 bits) simply declines.
    if not 2 <= n < 1 << 64:
        return None
    return prime_power_base(n)


def _cf_trivial(q, e):
    if e == 1:
        return 1
    if q % e == 1:
        return e
    return None


def _cf_q_congruent_minus_one(q, e):
    # q = -1 but not 1 modulo e forces m = 2 via e | q + 1.
    if e > 2 and (q + 1) % e == 0:
        return 2
    return None


def _cf_two_power(q, e):
    pp = _prime_power_or_none(e)
    if pp is None or pp[0] != 2 or pp[1] < 3 or q % 2 == 0:
        return None
    if q % 4 == 1:
        return gcd(e, q - 1)
    if (q + 1) % e == 0:
        return 2
    return 4


def _cf_eleven_power(q, e):
    pp = _prime_power_or_none(e)
    if pp is None or pp[0] != 11:
        return None
    k = pp[1]
    order = mult_order(q % e, e)
    if order % 2 == 0:
        return 2
    reduced = order
    while reduced % 11 == 0:
        reduced //= 11
    if reduced == 1:
        return gcd(e, q - 1)
    if order == 5 * 11 ** (k - 1):
        return 3
    return 5


def _cf_pierpont_power(q, e):
    pp = _prime_power_or_none(e)
    if pp is None or pp[0] == 2 or not is_pierpont_prime(pp[0]):
        return None
    p = pp[0]
    order = mult_order(q % e, e)
    reduced = order
    while reduced % p == 0:
        reduced //= p
    if reduced == 1:
        return gcd(e, q - 1)
    if order % 2 == 0:
        return 2
    return 3


def _cf_odd_prime_power_unipotent(q, e):
    pp = _prime_power_or_none(e)
    if pp is None or pp[0] == 2:
        return None
    if q % pp[0] == 1:
        return gcd(e, q - 1)
    return None


def _cf_hensel_lift(q, e):
    # Odd prime power e = p^k, k >= 2, with ord_e(q) = phi(e)/d for a
    # divisor d of p-1: m is unchanged when e is replaced by p.
    pp = _prime_power_or_none(e)
    if pp is None or pp[0] == 2 or pp[1] < 2:
        return None
    p = pp[0]
    order = mult_order(q % e, e)
    phi = euler_phi(e)
    if phi % order:
        return None
    d = phi // order
    if (p - 1) % d:
        return None
    return m_bfs(q % p, p).m


def _cf_squares_odd_prime_power(q, e):
    pp = _prime_power_or_none(e)
    if pp is None or pp[0] == 2:
        return None
    if mult_order(q % e, e) * 2 != euler_phi(e):
        return None
    return 2 if pp[0] % 4 == 1 else 3


def _cf_order_two(q, e):
    if (q * q - 1) % e:
        return None
    e1 = gcd(e, q - 1)
    e2 = gcd(e, q + 1)
    if e1 >= e2 or (e % 2 == 0 and ((q * q - 1) // e) % 2 == 0):
        return e1
    return 2 * e1


def _cf_twice_odd_prime_power(q, e):
    if e % 2 or e == 2:
        return None
    pp = _prime_power_or_none(e // 2)
    if pp is None or pp[0] == 2:
        return None
    p = pp[0]
    order = mult_order(q % e, e)
    while order % p == 0:
        order //= p
    if order == 1:
        return gcd(e, q - 1)
    return None


_CLOSED_FORM_RULES = (
    ("trivial", _cf_trivial),
    ("q_congruent_minus_one", _cf_q_congruent_minus_one),
    ("two_power", _cf_two_power),
    ("eleven_power", _cf_eleven_power),
    ("pierpont_power", _cf_pierpont_power),
    ("odd_prime_power_unipotent", _cf_odd_prime_power_unipotent),
    ("hensel_lift", _cf_hensel_lift),
    ("squares_odd_prime_power", _cf_squares_odd_prime_power),
    ("order_two", _cf_order_two),
    ("twice_odd_prime_power", _cf_twice_odd_prime_power),
)


def m_closed_form(q: int, e: int) -> MResult | None:
    """First applicable closed form, with an agreement assertion across all
    rules that fire."""
    _require_coprime(q, e)
    hits = []
    for rule_id, rule in _CLOSED_FORM_RULES:
        value = rule(q, e)
        if value is not None:
            hits.append((rule_id, value))
    if not hits:
        return None
    values = {value for _, value in hits}
    if len(values) != 1:
        raise AssertionError(f"closed forms disagree for q={q}, e={e}: {hits}")
    rule_id, value = hits[0]
    return MResult(m=value, method="closed_form", rule_id=rule_id)


def classify_large_m(q: int, e: int) -> LargeMCase:
    """Decide whether m(q, e) >= e/3 and certify the value when it is.

    The sporadic residue table is consulted first: for e = 3 the two-thirds
    family hypothesis also matches but its certified value lives in the
    table.
    """
    _require_coprime(q, e)
    if q % e == 1 % e:
        raise DomainError(f"q must not be 1 modulo e (q={q}, e={e})")
    b = q % e
    if (b, e) in _LARGE_M_TABLE:
        return LargeMCase("IV", _LARGE_M_TABLE[(b, e)])
    if q >= 3 and q % 2 == 1 and (2 * q - 2) % e == 0:
        k = (2 * q - 2) // e
        if k % 2 == 1 and (q - 1) % k == 0:
            return LargeMCase("I", e // 2)
    if q % 3 and (3 * q - 3) % e == 0:
        k = (3 * q - 3) // e
        if (q - 1) % k == 0:
            if k % 3 == 1 and q >= 4:
                return LargeMCase("II", e // 3)
            if k % 3 == 2 and q >= 5:
                return LargeMCase("III", e // 3)
    return LargeMCase("none")


def m_functional_equation(q: int, n: int, n_prime: int, e_prime: int) -> int:
    """m for e = e' * (q^n - 1)/(q^n' - 1), as (n/n') * m(q, e')."""
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if n_prime < 1 or n % n_prime:
        raise DomainError(f"n'={n_prime} must divide n={n}")
    if e_prime < 1 or (q**n_prime - 1) % e_prime:
        raise DomainError(f"e'={e_prime} must divide q^n' - 1")
    return (n // n_prime) * m_value(q, e_prime).m


# ---------------------------------------------------------------------------
# Finite candidate lists: divisors e of the n-th cyclotomic value (n prime)
# admitting m(q, e) = m < n.
# ---------------------------------------------------------------------------

def _poly_trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    quot = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        coeff = a[-1] / b[-1]
        shift = len(a) - len(b)
        quot[shift] = coeff
        for i, bc in enumerate(b):
            a[shift + i] -= coeff * bc
        _poly_trim(a)
    return quot, a


def _poly_sub_mul(u0, u1, q):
    """u0 - q*u1 for coefficient lists (LSB first)."""
    out = list(u0) + [Fraction(0)] * max(0, len(q) + len(u1) - 1 - len(u0))
    for i, qc in enumerate(q):
        if qc == 0:
            continue
        for j, uc in enumerate(u1):
            out[i + j] -= qc * uc
    return _poly_trim(out)


def _poly_bezout_constant(f, g):
    """For coprime f, g over Q: the denominator-clearing constant d such
    that d*a(X), d*b(X) are integral in a(X)f + b(X)g = 1."""
    r0, r1 = _poly_trim(list(f)), _poly_trim(list(g))
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        quot, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub_mul(s0, s1, quot)
        t0, t1 = t1, _poly_sub_mul(t0, t1, quot)
    if len(r0) != 1:
        raise AssertionError("polynomials were not coprime")
    c = r0[0]
    d = 1
    for x in s0 + t0:
        d = lcm(d, (x / c).denominator)
    return d


def small_e_candidates(n: int, m_max: int, *, keep_unfiltered: bool = False):
    """For prime n: which e with e | Phi_n(q) can have m(q, e) = m < n.

    Enumerates exponent tuples 0 = i_1 <= ... <= i_m <= n-2, clears the
    Bezout identity of 1 + X + ... + X^(n-1) and X^{i_1} + ... + X^{i_m} to
    an integer d, and keeps the divisors e of d that survive the parity /
    3-divisibility / phi-divisibility filters; finally each e stays listed
    under m only if some unit q of order n modulo e has m(q, e) = m.
    """
    if not is_prime(n):
        raise DomainError(f"n must be prime, got {n}")
    if not 1 <= m_max < n:
        raise DomainError(f"m_max must satisfy 1 <= m_max < n, got {m_max}")
    phi_n = [Fraction(1)] * n  # 1 + X + ... + X^(n-1)

    def tuples(m):
        def rec(prefix, lo):
            if len(prefix) == m:
                yield tuple(prefix)
                return
            for i in range(lo, n - 1):
                yield from rec(prefix + [i], i)
        yield from rec([0], 0)

    candidates: dict[int, set[int]] = {m: set() for m in range(1, m_max + 1)}
    for m in range(1, m_max + 1):
        for tup in tuples(m):
            g = [Fraction(0)] * (max(tup) + 1)
            for i in tup:
                g[i] += 1
            d = _poly_bezout_constant(phi_n, g)
            for e in divisors(d):
                if e == 1:
                    continue
                if n % 2 and e % 2 == 0:
                    continue
                if n % 3 and e % 3 == 0:
                    continue
                if euler_phi(e) % n:
                    continue
                candidates[m].add(e)
    if keep_unfiltered:
        return candidates
    result: dict[int, set[int]] = {}
    for m, es in candidates.items():
        kept = {e for e in es if _m_achievable(e, n, m)}
        if kept:
            result[m] = kept
    return result


def _m_achievable(e: int, n: int, m: int) -> bool:
    """Is there a unit q of order n modulo e with m(q, e) = m?"""
    seen = set()
    for q in range(2, e):
        if gcd(q, e) != 1 or mult_order(q, e) != n:
            continue
        sub = frozenset(pow(q, i, e) for i in range(n))
        if sub in seen:
            continue
        seen.add(sub)
        if m_bfs(q, e).m == m:
            return True
    return False


# ---------------------------------------------------------------------------
# Tables.
# ---------------------------------------------------------------------------

def m_grid(q_range, e_range) -> dict[tuple[int, int], int]:
    """m(q, e) over a rectangle, only where gcd(q, e) = 1."""
    grid = {}
    for q in q_range:
        for e in e_range:
            if gcd(q, e) == 1:
                grid[(q, e)] = m_value(q, e).m
    return grid


def render_m_grid_csv(q_range, e_range) -> str:
    """Grid as CSV: header row of e values, one row per q, empty cell when
    gcd(q, e) != 1."""
    q_range = list(q_range)
    e_range = list(e_range)
    grid = m_grid(q_range, e_range)
    lines = ["q," + ",".join(str(e) for e in e_range)]
    for q in q_range:
        cells = [str(grid[(q, e)]) if (q, e) in grid else "" for e in e_range]
        lines.append(f"{q}," + ",".join(cells))
    return "\n".join(lines) + "\n"


def m_groups_by_residue(e: int) -> dict[int, list[int]]:
    """m -> all residues q != 1 modulo e with that value, ascending."""
    groups: dict[int, list[int]] = {}
    for q in range(2, e):
        if q % e != 1 and gcd(q, e) == 1:
            groups.setdefault(m_value(q, e).m, []).append(q)
    return {m: sorted(v) for m, v in sorted(groups.items())}


def m_groups_by_generator(e: int) -> dict[int, list[int]]:
    """m -> smallest generators of the nontrivial cyclic subgroups of
    (Z/e)^x, grouped by the (subgroup-invariant) value of m."""
    reps: dict[frozenset, int] = {}
    for q in range(2, e):
        if gcd(q, e) != 1 or q % e == 1:
            continue
        order = mult_order(q, e)
        sub = frozenset(pow(q, i, e) for i in range(order))
        gen = reps.get(sub)
        if gen is None or q < gen:
            reps[sub] = q
    groups: dict[int, list[int]] = {}
    for q in reps.values():
        groups.setdefault(m_value(q, e).m, []).append(q)
    return {m: sorted(v) for m, v in sorted(groups.items())}


def render_m_groups(e_range, *, by: str = "residues") -> str:
    """One line per e: 'e; m1: {q...}; m2: {q...}' with groups ascending."""
    if by not in ("residues", "generators"):
        raise DomainError(f"unknown grouping {by!r}")
    fn = m_groups_by_residue if by == "residues" else m_groups_by_generator
    lines = []
    for e in e_range:
        groups = fn(e)
        parts = [
            f"{m}: {{{', '.join(str(q) for q in qs)}}}" for m, qs in groups.items()
        ]
        lines.append(f"{e}; " + "; ".join(parts))
    return "\n".join(lines) + "\n"


def m_by_subgroup(e: int) -> dict[int, int]:
    """q_rep -> m(q_rep, e) for the smallest generator of every cyclic
    subgroup of (Z/e)^x, with e + 1 standing in for the trivial subgroup.
    Used by validation sweeps; m is constant on subgroups."""
    out = {e + 1: e if e > 1 else 1}
    if e <= 2:
        return out
    reps: dict[frozenset, int] = {}
    for q in range(2, e):
        if gcd(q, e) != 1:
            continue
        order = mult_order(q, e)
        sub = frozenset(pow(q, i, e) for i in range(order))
        if sub not in reps or q < reps[sub]:
            reps[sub] = q
    for sub, q in reps.items():
        if sub == frozenset({1}):
            continue
        out[q] = m_bfs(q, e).m
    return out
