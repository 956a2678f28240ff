"""Exact arithmetic in Z[theta] = Z[x]/(x^3 + a x^2 + b x + c), power basis 1, theta, theta^2."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

Coords = tuple[int, int, int]


def companion(a: int, b: int, c: int) -> list[list[int]]:
    """Matrix of multiplication by theta; column i is theta * theta^i."""
    return [[0, 0, -c],
            [1, 0, -b],
            [0, 1, -a]]


def _matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def mult_matrix(coords: Sequence, abc: Sequence[int]) -> list[list]:
    """Matrix of multiplication by u + v theta + w theta^2."""
    u, v, w = coords
    C = companion(*abc)
    C2 = _matmul(C, C)
    return [[u * (i == j) + v * C[i][j] + w * C2[i][j] for j in range(3)] for i in range(3)]


def det3(M) -> int:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def norm(coords: Sequence, abc: Sequence[int]) -> int:
    return det3(mult_matrix(coords, abc))


def multiply(x: Sequence, y: Sequence, abc: Sequence[int]) -> tuple:
    M = mult_matrix(x, abc)
    return tuple(sum(M[i][k] * y[k] for k in range(3)) for i in range(3))


def inverse(x: Sequence, abc: Sequence[int]) -> tuple:
    """Inverse of x; integral when x is a unit, Fractions otherwise."""
    M = mult_matrix(x, abc)
    d = det3(M)
    if d == 0:
        raise ZeroDivisionError("zero divisor")
    # first column of adj(M) solves M y = e_0 up to the factor det
    adj0 = [M[1][1] * M[2][2] - M[1][2] * M[2][1],
            -(M[1][0] * M[2][2] - M[1][2] * M[2][0]),
            M[1][0] * M[2][1] - M[1][1] * M[2][0]]
    if abs(d) == 1:
        return tuple(v * d for v in adj0)
    return tuple(Fraction(v, d) for v in adj0)


def power(x: Sequence, n: int, abc: Sequence[int]) -> tuple:
    if n < 0:
        x = inverse(x, abc)
        n = -n
    result: tuple = (1, 0, 0)
    base = tuple(x)
    while n:
        if n & 1:
            result = multiply(result, base, abc)
        base = multiply(base, base, abc)
        n >>= 1
    return result


def canonical_sign(coords: Sequence[int]) -> Coords:
    """Representative modulo +-1: first nonzero coordinate positive."""
    for v in coords:
        if v != 0:
            return tuple(coords) if v > 0 else tuple(-c for c in coords)
    return tuple(coords)


def norms_in_box(abc: Sequence[int], H: int) -> tuple[np.ndarray, np.ndarray]:
    """All coordinate vectors with |coords_i| <= H and their norms (vectorized).

    Returns (coords array of shape (n, 3), norms).  Falls back to Python
    integers if int64 could overflow.
    """
    r = np.arange(-H, H + 1)
    U, V, W = np.meshgrid(r, r, r, indexing="ij")
    coords = np.stack([U.ravel(), V.ravel(), W.ravel()], axis=1)
    C = np.array(companion(*abc), dtype=object)
    C2 = C.dot(C)
    worst = H * (1 + int(np.max(np.abs(C))) + int(np.max(np.abs(C2))))
    dtype = np.int64 if 6 * worst ** 3 < 2 ** 62 else object
    coords = coords.astype(dtype)
    I = np.eye(3, dtype=int)
    M = [[coords[:, 0] * int(I[i][j]) + coords[:, 1] * int(C[i][j]) + coords[:, 2] * int(C2[i][j])
          for j in range(3)] for i in range(3)]
    return coords, det3(M)
