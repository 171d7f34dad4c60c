"""Discrete Fourier transform over the multiplicative group of a field.

With g the field generator and N = Q - 1, ``group_dft(F, a, sign)`` returns
``A[j] = sum_k a[k] * g**(sign*j*k)``.  Evaluation of a reduced polynomial at
every nonzero point and interpolation from a full table are both one such
transform, so these replace the O(Q^2) paths once Q grows.

Mixed-radix Cooley-Tukey over the prime factors of N; cost is
``N * sum(prime factors)`` field multiply-adds.
"""

import numpy as np
from sympy import factorint


def _radices(N):
    out = []
    for prime, mult in sorted(factorint(N).items()):
        out.extend([prime] * mult)
    return out


class _Accumulator:
    """Running field sum of element arrays using packed digits."""

    def __init__(self, F, shape):
        self.F = F
        self.pending = 0
        self.acc = np.zeros(shape, dtype=np.int64)

    def add(self, x):
        F = self.F
        if F.p == 2:
            self.acc ^= x
            return
        self.acc += F._packed[x]
        self.pending += 1
        if self.pending == F._slot_cap:
            self.acc = F._packed[F._unpack(self.acc)]
            self.pending = 0

    def result(self):
        if self.F.p == 2:
            return self.acc
        return self.F._unpack(self.acc)


def _dft(F, a, e, radices):
    # a has shape (batch, M); the transform root is g**e
    batch, M = a.shape
    if M == 1:
        return a
    N0 = F.order - 1
    r = radices[0]
    m = M // r
    sub = a.reshape(batch, m, r).transpose(0, 2, 1).reshape(batch * r, m)
    sub = _dft(F, sub, (e * r) % N0, radices[1:]).reshape(batch, r, m)
    j = np.arange(M, dtype=np.int64)
    j0 = j % m
    acc = _Accumulator(F, (batch, M))
    acc.add(sub[:, 0, :][:, j0])
    for s in range(1, r):
        acc.add(F.scale_log(sub[:, s, :][:, j0], (e * s * j) % N0))
    return acc.result()


def group_dft(F, a, sign=1):
    N = F.order - 1
    a = np.asarray(a, dtype=np.int64)
    if a.shape != (N,):
        raise ValueError(f"expected {N} values, got shape {a.shape}")
    if N == 1:
        return a.copy()
    e = sign % N
    return _dft(F, a.reshape(1, N), e, _radices(N))[0]
