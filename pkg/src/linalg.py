"""
Dense eigenvalue kernels for the validation lab.

Copyright (c) 2025 Mathew Mark Mytka
SPDX-License-Identifier: LicenseRef-ESL-A

Licensed under the Earthian Stewardship License (ESL-A).
See LICENSE file for full terms.

In-house kernels, cross-checked against scipy.linalg in the tests:

- hessenberg: Householder reduction to upper Hessenberg form
- qr_eigvals: implicitly shifted complex QR (Wilkinson shift, deflation, exceptional shifts)
- jacobi_eigvalsh: cyclic Jacobi for Hermitian matrices
- smin_jacobi: smallest singular value via Jacobi on M^H M

Classes:
    House: Householder reflector
    Givens: complex plane rotation
    ConvergenceError: QR did not converge; carries partial results
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg as sla

logger = logging.getLogger(__name__)

__all__ = [
    'ConvergenceError',
    'House',
    'Givens',
    'hessenberg',
    'qr_eigvals',
    'jacobi_eigvalsh',
    'smin_jacobi',
    'inverse_iteration_residuals',
]

EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    """Raised when the QR iteration exhausts its budget."""

    def __init__(self, message: str, partial: List[complex], iterations: int):
        super().__init__(message)
        self.partial = partial
        self.iterations = iterations


# =============================================================================
# Elementary transforms
# =============================================================================

class House:
    """Reflector H = I - beta v v^H with H x = alpha ||x|| e_1, |alpha| = 1."""

    def __init__(self, x: np.ndarray):
        x = np.asarray(x, dtype=complex)
        v = x.copy()
        gamma = v[0]
        sigma = np.linalg.norm(v[1:]) if v.size > 1 else 0.0
        xnorm = math.hypot(abs(gamma), sigma)
        if sigma == 0:
            self.beta = 0.0
            self.alpha = 1.0 if gamma == 0 else gamma / abs(gamma)
            self.v = v
        else:
            phase = 1.0 if gamma == 0 else gamma / abs(gamma)
            v[0] = gamma + phase * xnorm
            self.alpha = -phase
            self.v = v / np.linalg.norm(v)
            self.beta = 2.0
        self.xnorm = xnorm

    def apply_left(self, a: np.ndarray) -> None:
        """a <- H a, in place."""
        if self.beta:
            a -= self.beta * np.outer(self.v, self.v.conj() @ a)

    def apply_right(self, a: np.ndarray) -> None:
        """a <- a H, in place."""
        if self.beta:
            a -= self.beta * np.outer(a @ self.v, self.v.conj())


class Givens:
    """G = [[c, s], [-conj(s), c]] with G [a, b]^T = [r, 0]^T, c real."""

    def __init__(self, a: complex, b: complex):
        r = math.hypot(abs(a), abs(b))
        if r == 0:
            self.c, self.s = 1.0, 0j
        elif a == 0:
            self.c, self.s = 0.0, 1 + 0j
        else:
            self.c = abs(a) / r
            self.s = (a / abs(a)) * np.conj(b) / r

    def rows(self, top: np.ndarray, bottom: np.ndarray) -> None:
        """Rows (top, bottom) <- G (top, bottom), in place."""
        t = top.copy()
        top[:] = self.c * t + self.s * bottom
        bottom[:] = -np.conj(self.s) * t + self.c * bottom

    def cols(self, left: np.ndarray, right: np.ndarray) -> None:
        """Columns (left, right) <- (left, right) G^H, in place."""
        t = left.copy()
        left[:] = self.c * t + np.conj(self.s) * right
        right[:] = -self.s * t + self.c * right


# =============================================================================
# Hessenberg reduction and QR
# =============================================================================

def hessenberg(a: np.ndarray, calc_q: bool = False):
    """
    Householder reduction A = Q H Q^H with H upper Hessenberg.

    Args:
        a: Square matrix
        calc_q: Also return the unitary Q

    Returns:
        H, or (H, Q) when calc_q is set
    """
    h = np.array(a, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError('expected square matrix')
    n = h.shape[0]
    q = np.eye(n, dtype=complex) if calc_q else None
    for k in range(n - 2):
        house = House(h[k + 1:, k])
        house.apply_left(h[k + 1:, k:])
        house.apply_right(h[:, k + 1:])
        h[k + 2:, k] = 0.0
        if calc_q:
            house.apply_right(q[:, k + 1:])
    return (h, q) if calc_q else h


def _wilkinson_shift(h: np.ndarray, hi: int) -> complex:
    a, b = h[hi - 1, hi - 1], h[hi - 1, hi]
    c, d = h[hi, hi - 1], h[hi, hi]
    half = 0.5 * (a - d)
    root = np.sqrt(half * half + b * c)
    mid = 0.5 * (a + d)
    mu1, mu2 = mid + root, mid - root
    return mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2


def _qr_step(h: np.ndarray, lo: int, hi: int, shift: complex) -> None:
    """
    One implicitly shifted QR step on the active block h[lo:hi+1, lo:hi+1].

    The shift only enters the first rotation; the bulge it creates at
    (j+2, j) is chased off the bottom, keeping the block Hessenberg.
    """
    block = h[lo:hi + 1, lo:hi + 1]
    k = block.shape[0]
    g = Givens(block[0, 0] - shift, block[1, 0])
    for j in range(k - 1):
        if j > 0:
            g = Givens(block[j, j - 1], block[j + 1, j - 1])
        start = max(j - 1, 0)
        g.rows(block[j, start:], block[j + 1, start:])
        if j > 0:
            block[j + 1, j - 1] = 0.0
        top = min(j + 3, k)
        g.cols(block[:top, j], block[:top, j + 1])


def qr_eigvals(a: np.ndarray, balance: bool = True, max_iter: Optional[int] = None
               ) -> Tuple[np.ndarray, int]:
    """
    All eigenvalues of a square matrix by implicitly shifted complex QR on its
    Hessenberg form, deflating at negligible subdiagonal entries.

    Wilkinson shifts, with an exceptional shift after every 10 iterations
    without deflation.

    Args:
        a: Square matrix
        balance: Balance first (scipy.linalg.matrix_balance)
        max_iter: Iteration budget, default 30 n

    Returns:
        (eigenvalues, iterations)

    Raises:
        ConvergenceError: budget exhausted; `partial` holds deflated eigenvalues
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex), 0
    if balance and n > 1:
        a, _ = sla.matrix_balance(a, permute=False)
    h = hessenberg(a)
    budget = 30 * n if max_iter is None else max_iter
    norm = max(np.linalg.norm(h), np.finfo(float).tiny)

    eigs: List[complex] = []
    hi = n - 1
    iterations = 0
    stalled = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(complex(h[0, 0]))
            break
        lo = hi
        while lo > 0:
            scale = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if abs(h[lo, lo - 1]) <= EPS * (scale if scale > 0 else norm):
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(complex(h[hi, hi]))
            hi -= 1
            stalled = 0
            continue
        iterations += 1
        stalled += 1
        if iterations > budget:
            logger.warning("QR did not converge after %d iterations (%d of %d found)",
                           iterations - 1, len(eigs), n)
            raise ConvergenceError(f"QR did not converge in {budget} iterations",
                                   partial=eigs, iterations=iterations - 1)
        if stalled % 10 == 0:
            wobble = abs(h[hi, hi - 1]) + (abs(h[hi - 1, hi - 2]) if hi - 2 >= lo else 0.0)
            shift = h[hi, hi] + 0.75 * wobble * complex(1.0, 1.0)
            logger.debug("exceptional shift at iteration %d", iterations)
        else:
            shift = _wilkinson_shift(h, hi)
        _qr_step(h, lo, hi, shift)
    logger.debug("QR converged: n=%d iterations=%d", n, iterations)
    return np.asarray(eigs[::-1], dtype=complex), iterations


def inverse_iteration_residuals(a: np.ndarray, eigenvalues: np.ndarray, steps: int = 2) -> np.ndarray:
    """
    Relative residuals ||A v - lambda v|| / ||A|| with v from inverse
    iteration on A - lambda I (lambda nudged off exact singularity).
    """
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    norm = max(np.linalg.norm(a, 2), np.finfo(float).tiny)
    nudge = 16 * EPS * max(norm, 1.0)
    rng = np.random.default_rng(0)
    start = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    out = np.empty(len(eigenvalues))
    eye = np.eye(n)
    for j, lam in enumerate(eigenvalues):
        lu = sla.lu_factor(a - (lam + nudge) * eye, check_finite=False)
        v = start / np.linalg.norm(start)
        for _ in range(steps):
            v = sla.lu_solve(lu, v, check_finite=False)
            size = np.linalg.norm(v)
            if not np.isfinite(size) or size == 0:
                break
            v = v / size
        out[j] = np.linalg.norm(a @ v - lam * v) / norm
    return out


# =============================================================================
# Hermitian Jacobi
# =============================================================================

def jacobi_eigvalsh(a: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations, until the
    off-diagonal Frobenius norm is at most tol * ||A||_F.

    Each (p, q) rotation first rotates the phase of a_pq onto the real axis,
    then applies the real symmetric rotation.

    Returns:
        Eigenvalues in ascending order
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if not np.allclose(a, a.conj().T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max())):
        raise ValueError("matrix is not Hermitian")
    scale = np.linalg.norm(a)
    if n == 1 or scale == 0:
        return np.sort(np.real(np.diag(a)))
    for sweep in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off <= tol * scale:
            logger.debug("Jacobi converged after %d sweeps", sweep)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= EPS * 1e-3 * scale:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                phi = (aqq - app) / (2.0 * mag)
                t = 1.0 / (abs(phi) + math.sqrt(phi * phi + 1.0))
                if phi < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) [[c, s], [-s, c]]
                g00, g01 = c, s
                g10, g11 = -s * np.conj(phase), c * np.conj(phase)
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = col_p * g00 + col_q * g10
                a[:, q] = col_p * g01 + col_q * g11
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(g00) * row_p + np.conj(g10) * row_q
                a[q, :] = np.conj(g01) * row_p + np.conj(g11) * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p], a[q, q] = a[p, p].real, a[q, q].real
    else:
        logger.warning("Jacobi stopped after %d sweeps", max_sweeps)
    return np.sort(np.real(np.diag(a)))


def smin_jacobi(m: np.ndarray) -> float:
    """sqrt of the smallest eigenvalue of M^H M (clipped at 0)."""
    m = np.asarray(m, dtype=complex)
    gram = m.conj().T @ m
    gram = 0.5 * (gram + gram.conj().T)
    return math.sqrt(max(0.0, float(jacobi_eigvalsh(gram)[0])))
