"""Batched linear algebra over a prime field, vectorised with numpy.

Values are int64 residues in ``[0, p)``.  With ``p < 2**31.5`` every product
of two residues fits in int64, so each multiplication is followed by ``% p``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

MAX_PRIME = 3_037_000_493  # largest prime with p*p < 2**63


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


def primes_above(lo: int, count: int) -> list[int]:
    """The first ``count`` primes strictly greater than ``lo``."""
    out = []
    x = lo + 1
    while len(out) < count:
        if is_prime(x):
            out.append(x)
        x += 1
    return out


def inv_mod(a: np.ndarray, p: int) -> np.ndarray:
    """Elementwise inverse by Fermat; zero maps to zero."""
    result = np.ones_like(a)
    base = a % p
    e = p - 2
    while e:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return np.where(a % p == 0, 0, result)


def det_and_inverse(mats: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """In-place Gauss-Jordan inversion of a batch ``(B, n, n)`` with row pivoting.

    Returns ``(det, inverse, singular)``; ``inverse`` is meaningless where
    ``singular`` is set.
    """
    B, n, _ = mats.shape
    A = mats % p
    det = np.ones(B, dtype=np.int64)
    singular = np.zeros(B, dtype=bool)
    idx = np.arange(B)
    swaps = []
    for k in range(n):
        nz = A[:, k:, k] != 0
        has = nz.any(axis=1)
        piv = nz.argmax(axis=1) + k
        singular |= ~has
        swap = piv != k
        if swap.any():
            top = A[idx, k].copy()
            A[idx, k] = A[idx, piv]
            A[idx, piv] = top
            det = np.where(swap, (p - det) % p, det)
        swaps.append(piv)
        pv = A[:, k, k]
        det = det * pv % p
        pinv = inv_mod(np.where(has, pv, 1), p)
        row = A[:, k] * pinv[:, None] % p
        row[:, k] = pinv
        f = A[:, :, k].copy()
        f[:, k] = 0
        A[:, :, k] = 0
        A = (A - f[:, :, None] * row[:, None, :]) % p
        A[:, k] = row
        A[:, :, k] = np.where(np.arange(n)[None, :] == k, pinv[:, None], (p - f) * pinv[:, None] % p)
    for k in reversed(range(n)):
        piv = swaps[k]
        if (piv != k).any():
            col = A[idx, :, k].copy()
            A[idx, :, k] = A[idx, :, piv]
            A[idx, :, piv] = col
    det = np.where(singular, 0, det)
    return det, A, singular


def determinants(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants of a batch ``(B, n, n)`` by elimination on the trailing block."""
    B, n, _ = mats.shape
    A = mats % p
    det = np.ones(B, dtype=np.int64)
    idx = np.arange(B)
    for col in range(n):
        nz = A[:, :, 0] != 0
        has = nz.any(axis=1)
        piv = nz.argmax(axis=1)
        swap = piv != 0
        if swap.any():
            top = A[:, 0].copy()
            A[:, 0] = A[idx, piv]
            A[idx, piv] = top
            det = np.where(swap, (p - det) % p, det)
        pv = np.where(has, A[:, 0, 0], 0)
        det = det * pv % p
        if col == n - 1:
            break
        scale = inv_mod(np.where(has, pv, 1), p)
        f = A[:, 1:, 0] * scale[:, None] % p
        A = (A[:, 1:, 1:] - f[:, :, None] * A[:, 0, 1:][:, None, :]) % p
    return det


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(factors: dict[int, int]) -> list[int]:
    divs = [1]
    for q, k in factors.items():
        divs = [d * q**i for d in divs for i in range(k + 1)]
    return sorted(divs)


@lru_cache(maxsize=None)
def subgroup(size: int, p: int) -> tuple[int, int]:
    """``(N, g)``: the smallest ``N >= size`` dividing ``p - 1`` and an element of order ``N``."""
    factors = factorize(p - 1)
    order = next((d for d in _divisors(factors) if d >= size), None)
    if order is None:
        raise ValueError(f"no subgroup of size >= {size} in GF({p})")
    primes = [q for q in factorize(order)]
    for a in range(2, p):
        g = pow(a, (p - 1) // order, p)
        if all(pow(g, order // q, p) != 1 for q in primes):
            return order, g
    raise ValueError("no generator found")  # pragma: no cover


def power_table(g: int, order: int, p: int) -> np.ndarray:
    """``g**k mod p`` for ``k`` in ``0..order-1``."""
    out = np.empty(order, dtype=np.int64)
    out[0] = 1
    filled = 1
    while filled < order:
        take = min(filled, order - filled)
        out[filled:filled + take] = out[:take] * pow(g, filled, p) % p
        filled += take
    return out


_LIMB = 11
_MASK = (1 << _LIMB) - 1


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """``a @ b mod p`` for residues below ``2**33``, exact through float64 BLAS.

    Both operands are split into three 11-bit limbs; every partial product sum
    stays below ``2**53`` as long as the inner dimension is under ``2**31``.
    """
    la = [((a >> (_LIMB * i)) & _MASK).astype(np.float64) for i in range(3)]
    lb = [((b >> (_LIMB * i)) & _MASK).astype(np.float64) for i in range(3)]
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(3):
        for j in range(3):
            part = (la[i] @ lb[j]).astype(np.int64) % p
            out = (out + part * pow(2, _LIMB * (i + j), p)) % p
    return out


def coefficients(values: np.ndarray, g: int, order: int, p: int,
                 columns: range | None = None) -> np.ndarray:
    """Coefficients of polynomials of degree ``< order`` from their values at ``g**i``.

    ``values`` has shape ``(R, order)``.  Only the coefficients listed in
    ``columns`` are computed (all of them by default), constant term first.
    """
    if columns is None:
        columns = range(order)
    pw = power_table(g, order, p)
    i = np.arange(order)
    k = np.arange(columns.start, columns.stop)
    inv_dft = pw[(-np.outer(i, k)) % order]
    scale = pow(order, p - 2, p)
    return matmul_mod(values % p, inv_dft, p) * scale % p


def lowest_degrees(values: np.ndarray, g: int, order: int, p: int,
                   block: int = 256) -> np.ndarray:
    """Lowest nonzero coefficient index per row, ``-1`` for the zero polynomial.

    Coefficients are recovered block by block and the scan stops once every
    row has a nonzero coefficient.
    """
    R = values.shape[0]
    low = np.full(R, -1, dtype=np.int64)
    todo = np.arange(R)
    for start in range(0, order, block):
        cols = range(start, min(order, start + block))
        coeffs = coefficients(values[todo], g, order, p, cols)
        nz = coeffs != 0
        found = nz.any(axis=1)
        low[todo[found]] = start + nz.argmax(axis=1)[found]
        todo = todo[~found]
        if todo.size == 0:
            break
    return low


def lowest_degree(coeffs: np.ndarray) -> np.ndarray:
    """Index of the lowest nonzero coefficient per row, ``-1`` if all vanish."""
    nz = coeffs != 0
    low = nz.argmax(axis=1)
    return np.where(nz.any(axis=1), low, -1)
