"""Independent dense linear algebra for cross-checking solver output.

Deliberately naive: textbook row reduction over Fraction lists, plus
integer elimination modulo large primes.  Shares no code with the
package's Mat/Subspace implementation.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import lcm

# the ten smallest primes above 10**6
PRIMES = (
    1000003, 1000033, 1000037, 1000039, 1000081,
    1000099, 1000117, 1000121, 1000133, 1000151,
)


def _as_rows(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns, no pivoting tricks."""
    m = _as_rows(rows)
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def rank_mod(rows, p: int) -> int:
    """Rank of the matrix reduced modulo p, denominators cleared per row."""
    m = []
    for row in _as_rows(rows):
        scale = lcm(*(x.denominator for x in row)) if row else 1
        m.append([(x.numerator * (scale // x.denominator)) % p for x in row])
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def checked_rank(rows, seed: int = 0) -> int:
    """Fraction rank, cross-checked modulo 3 random primes above 10**6."""
    rows = _as_rows(rows)
    r = rank(rows)
    if rows:
        rng = random.Random(seed)
        for p in rng.sample(PRIMES, 3):
            rm = rank_mod(rows, p)
            if rm != r:
                raise AssertionError(f"rank mod {p} is {rm}, exact rank is {r}")
    return r


def checked_nullity(rows, ncols: int, seed: int = 0) -> int:
    rows = _as_rows(rows)
    if not rows:
        return ncols
    if any(len(row) != ncols for row in rows):
        raise ValueError("row length mismatch")
    return ncols - checked_rank(rows, seed=seed)


def mat_rows(M) -> list[list[Fraction]]:
    """Pull a package Mat apart into plain lists for the oracle."""
    r, c = M.shape
    return [[M[i, j] for j in range(c)] for i in range(r)]


def nullspace_dim(M, seed: int = 0) -> int:
    rows = mat_rows(M)
    return checked_nullity(rows, M.shape[1], seed=seed)


def solve_dense(rows, rhs) -> list[Fraction] | None:
    """One solution of A x = b by elimination on the augmented matrix,
    free variables set to zero; None when inconsistent."""
    rows = _as_rows(rows)
    b = [Fraction(x) for x in rhs]
    if len(rows) != len(b):
        raise ValueError("rhs length mismatch")
    ncols = len(rows[0]) if rows else 0
    aug = [row + [bi] for row, bi in zip(rows, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return x


def hoch_delta2(A, fvals: dict[tuple[int, int], tuple]) -> dict[tuple[int, int, int], tuple]:
    """Three-argument coboundary of a 2-cochain, straight from the
    four-term display: mu(phi x, f(y,z)) - f(mu(x,y), psi z)
    + f(phi x, mu(y,z)) - mu(f(x,y), psi z).  Written out with plain
    loops, independent of the package's cochain machinery."""
    n = A.dim

    def mul(x, y):
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                for k in range(n):
                    out[k] += x[i] * y[j] * A.mul[i][j][k]
        return tuple(out)

    def app(M, v):
        return tuple(sum(M[i, j] * v[j] for j in range(n)) for i in range(n))

    def f(x, y):
        out = [Fraction(0)] * n
        for (i, j), val in fvals.items():
            c = x[i] * y[j]
            if c:
                for k in range(n):
                    out[k] += c * val[k]
        return tuple(out)

    def basis(i):
        return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))

    out = {}
    for a in range(n):
        for b_ in range(n):
            for c in range(n):
                x, y, z = basis(a), basis(b_), basis(c)
                term = [Fraction(0)] * n
                for k, v in enumerate(mul(app(A.phi, x), f(y, z))):
                    term[k] += v
                for k, v in enumerate(f(mul(x, y), app(A.psi, z))):
                    term[k] -= v
                for k, v in enumerate(f(app(A.phi, x), mul(y, z))):
                    term[k] += v
                for k, v in enumerate(mul(f(x, y), app(A.psi, z))):
                    term[k] -= v
                if any(term):
                    out[(a, b_, c)] = tuple(term)
    return out
