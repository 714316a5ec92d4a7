"""Small exact-arithmetic helpers used throughout the package.

Everything here works with plain Python integers (or Fractions) and
reduces mod p only at the end, so no precision is ever lost.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import NamedTuple, Sequence


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("inverse of 0 mod %d" % p)
    return pow(a, p - 2, p)


def fraction_mod(x: "Fraction | int", p: int) -> int:
    """Reduce an exact rational whose denominator is prime to p."""
    fr = Fraction(x)
    return fr.numerator * inv_mod(fr.denominator, p) % p


def p_adic_digits(r: int, p: int) -> tuple[int, ...]:
    """Base-p digits of r >= 0, least significant first; () for r = 0."""
    if r < 0:
        raise ValueError("negative integer has no p-adic digits")
    out = []
    while r:
        r, d = divmod(r, p)
        out.append(d)
    return tuple(out)


def digit(r: int, i: int, p: int) -> int:
    """The i-th base-p digit of r, with digit(r, i) = 0 for all i < 0."""
    if i < 0:
        return 0
    return (r // p**i) % p


def from_digits(digits: Sequence[int], p: int) -> int:
    val = 0
    for d in reversed(digits):
        val = val * p + d
    return val


def binom_mod(n: int, k: int, p: int) -> int:
    if k < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k)) % p


def multinomial_mod(b: int, R: Sequence[int], p: int) -> int:
    """b! / ((b - sum R)! * prod r_i!) mod p.

    Total on all integer inputs: 0 whenever some r_i < 0 or sum R > b,
    which also covers b < 0.
    """
    R = tuple(R)
    if any(r < 0 for r in R):
        return 0
    s = sum(R)
    if s > b:
        return 0
    val = factorial(b)
    for r in R:
        val //= factorial(r)
    return val // factorial(b - s) % p


def mu_mod(q: int, p: int, reps: int = 1) -> int:
    """((h!)^q * (-1)^(h q (q-1)/2)) ** reps mod p, with h = (p-1)/2."""
    h = (p - 1) // 2
    exp = h * (q * (q - 1) // 2) * reps
    val = pow(factorial(h) % p, q * reps, p)
    return -val % p if exp % 2 else val


class MilnorStats(NamedTuple):
    """Bookkeeping attached to a Milnor index pair (S, R) in degree q."""

    weight: int  # sum (p^i - 1) r_i over i = 1..len(R)
    sign_exp: int  # len(S) + sum(S) + sum i * r_i
    r_star: tuple[int, ...]  # (q - 2 sum R, r_1, ..., r_{n-1})
    r0: int  # q - len(S) - 2 sum R


def seq_stats(S: Sequence[int], R: Sequence[int], q: int, p: int) -> MilnorStats:
    S, R = tuple(S), tuple(R)
    total = sum(R)
    weight = sum((p**i - 1) * r for i, r in enumerate(R, start=1))
    sign_exp = len(S) + sum(S) + sum(i * r for i, r in enumerate(R, start=1))
    r_star = (q - 2 * total,) + R[:-1]
    return MilnorStats(weight, sign_exp, r_star, q - len(S) - 2 * total)


def st_operation_degree(S: Sequence[int], R: Sequence[int], p: int) -> int:
    """Degree of the Milnor-basis operation indexed by (S, R)."""
    return sum(2 * p**s - 1 for s in S) + sum(
        2 * r * (p**i - 1) for i, r in enumerate(R, start=1)
    )


def solve_exact(
    columns: Sequence[dict], target: dict, p: int
) -> "list[int] | None":
    """Solve sum_j c_j * columns[j] == target over Z/p.

    Each column (and the target) is a sparse {key: residue} map; the keys
    index the equations.  Returns the unique coefficient vector, None when
    the system is inconsistent.  Raises ArithmeticError when the columns
    are linearly dependent, since none of our generating sets should be.
    """
    ncols = len(columns)
    keys = set(target)
    for col in columns:
        keys.update(col)
    # Sparse row-reduction: rows indexed by equation keys, entry j is the
    # coefficient of unknown c_j; slot ncols holds the right-hand side.
    pivots: dict[int, dict[int, int]] = {}
    for key in keys:
        row = {j: col[key] % p for j, col in enumerate(columns) if key in col and col[key] % p}
        t = target.get(key, 0) % p
        if t:
            row[ncols] = t
        while row:
            lead = min(j for j in row if j != ncols) if any(j != ncols for j in row) else ncols
            if lead == ncols:
                return None  # 0 == nonzero
            if lead in pivots:
                piv = pivots[lead]
                factor = row[lead]
                for j, v in piv.items():
                    nv = (row.get(j, 0) - factor * v) % p
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
            else:
                inv = inv_mod(row[lead], p)
                pivots[lead] = {j: v * inv % p for j, v in row.items()}
                break
    if len(pivots) < ncols:
        raise ArithmeticError("linearly dependent columns in exact solve")
    # Back-substitute to a fully reduced system, then read coefficients.
    solution = [0] * ncols
    for lead in sorted(pivots, reverse=True):
        row = pivots[lead]
        val = row.get(ncols, 0)
        for j, v in row.items():
            if j != lead and j != ncols:
                val = (val - v * solution[j]) % p
        solution[lead] = val
    return solution


def matrix_rank_mod(rows: Sequence[Sequence[int]], p: int) -> int:
    work = [list(r) for r in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(work)) if work[i][col] % p), None)
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = inv_mod(work[rank][col], p)
        work[rank] = [v * inv % p for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][col] % p:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[rank])]
        rank += 1
    return rank
