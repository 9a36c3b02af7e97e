"""Exact dense linear algebra over prime fields and over the integers.

Matrices over F_p are plain ``numpy`` int64 arrays with entries in ``[0, p)``.
Integer matrices are lists of rows of Python ints so that Bareiss elimination
never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

FMatrix = np.ndarray
ZMatrix = List[List[int]]

# Above this modulus a single int64 dot product of length > 1 may overflow.
_SAFE_DOT = 2**63 - 1


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    """The prime field F_p, 2 <= p < 2**31."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, (int, np.integer)) or not 2 <= self.p < 2**31:
            raise ValueError(f"modulus out of range: {self.p!r}")
        if not is_prime(int(self.p)):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, x: int) -> int:
        return pow(int(x) % self.p, -1, self.p)

    def matrix(self, rows, shape: Optional[Tuple[int, int]] = None) -> FMatrix:
        return fmat(rows, self.p, shape)


def fmat(rows, p: int, shape: Optional[Tuple[int, int]] = None) -> FMatrix:
    """Build an F_p matrix from nested lists, reducing entries mod p.

    ``shape`` is required for empty matrices, whose nesting loses a dimension.
    """
    a = np.array(rows, dtype=object)
    if shape is not None:
        a = a.reshape(shape)
    if a.ndim != 2:
        raise ValueError("expected a 2-d list of rows; pass shape for empty matrices")
    return (a % p).astype(np.int64)


def zeros(rows: int, cols: int) -> FMatrix:
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n: int) -> FMatrix:
    return np.eye(n, dtype=np.int64)


def f_mul(a: FMatrix, b: FMatrix, p: int) -> FMatrix:
    """Matrix product mod p."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    inner = a.shape[1]
    if inner == 0:
        return zeros(a.shape[0], b.shape[1])
    if (p - 1) ** 2 * inner <= _SAFE_DOT:
        return (a @ b) % p
    return (a.astype(object) @ b.astype(object) % p).astype(np.int64)


def rref(m: FMatrix, p: int) -> Tuple[FMatrix, List[int]]:
    """Reduced row echelon form over F_p and the list of pivot columns."""
    r = np.array(m, dtype=np.int64) % p
    rows, cols = r.shape
    pivots: List[int] = []
    row = 0
    for c in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, c])[0]
        if nz.size == 0:
            continue
        k = row + int(nz[0])
        if k != row:
            r[[row, k]] = r[[k, row]]
        inv = pow(int(r[row, c]), -1, p)
        r[row] = (r[row] * inv) % p
        col = r[:, c].copy()
        col[row] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            r[hit] = (r[hit] - np.outer(col[hit], r[row]) % p) % p
        pivots.append(c)
        row += 1
    return r, pivots


def f_rank(m: FMatrix, p: int) -> int:
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def f_kernel_basis(m: FMatrix, p: int) -> FMatrix:
    """Columns spanning the right null space of ``m``."""
    rows, cols = m.shape
    if rows == 0:
        return identity(cols)
    r, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    k = zeros(cols, len(free))
    for j, f in enumerate(free):
        k[f, j] = 1
        for i, pc in enumerate(pivots):
            k[pc, j] = (-r[i, f]) % p
    return k


def f_image_basis(m: FMatrix, p: int) -> FMatrix:
    """Columns forming a basis of the column space of ``m`` (pivot columns)."""
    if m.size == 0:
        return zeros(m.shape[0], 0)
    _, pivots = rref(m, p)
    return np.array(m[:, pivots], dtype=np.int64) % p


def f_solve(a: FMatrix, b: FMatrix, p: int) -> Optional[FMatrix]:
    """Return X with ``a @ X == b`` mod p, or None when no solution exists."""
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    if b.shape[1] == 0:
        return zeros(n, 0)
    aug = np.hstack([np.array(a, dtype=np.int64).reshape(a.shape[0], n), b]) % p
    r, pivots = rref(aug, p)
    if pivots and pivots[-1] >= n:
        return None
    x = zeros(n, b.shape[1])
    for i, pc in enumerate(pivots):
        x[pc] = r[i, n:]
    return x


def f_inverse(a: FMatrix, p: int) -> Optional[FMatrix]:
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    return f_solve(a, identity(n), p) if f_rank(a, p) == n else None


def f_complement_units(sub: FMatrix, dim: int, p: int) -> List[int]:
    """Coordinates whose unit vectors complete the column span of ``sub``.

    Uses the non-pivot columns of the echelon form of ``sub`` transposed, so
    the choice is deterministic.
    """
    if sub.shape[1] == 0:
        return list(range(dim))
    _, pivots = rref(sub.T, p)
    used = set(pivots)
    return [c for c in range(dim) if c not in used]


def z_rank(m: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    a = [list(map(int, row)) for row in m]
    if not a or not a[0]:
        return 0
    rows, cols = len(a), len(a[0])
    rank = 0
    prev = 1
    for c in range(cols):
        piv = next((i for i in range(rank, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        pv = a[rank][c]
        for i in range(rank + 1, rows):
            lead = a[i][c]
            row_i = a[i]
            row_r = a[rank]
            for j in range(c, cols):
                row_i[j] = (pv * row_i[j] - lead * row_r[j]) // prev
        prev = pv
        rank += 1
        if rank == rows:
            break
    return rank


def poly_eval_matrix(coeffs: Sequence[int], m: FMatrix, p: int) -> FMatrix:
    """Evaluate a polynomial (low-degree first) at a square matrix, Horner style."""
    n = m.shape[0]
    out = zeros(n, n)
    for c in reversed(list(coeffs)):
        out = (f_mul(out, m, p) + int(c) % p * identity(n)) % p
    return out


def f_minpoly(m: FMatrix, p: int) -> List[int]:
    """Monic minimal polynomial of ``m``, coefficients lowest degree first."""
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("minimal polynomial of a non-square matrix")
    if n == 0:
        return [1]
    powers = [identity(n).reshape(-1)]
    cur = identity(n)
    for _ in range(n):
        cur = f_mul(cur, m, p)
        stacked = np.stack(powers, axis=1)
        x = f_solve(stacked, cur.reshape(-1, 1), p)
        if x is not None:
            poly = [(-int(v)) % p for v in x[:, 0]] + [1]
            return poly
        powers.append(cur.reshape(-1))
    raise AssertionError("Cayley-Hamilton violated")  # unreachable for square input
