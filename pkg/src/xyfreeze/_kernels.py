"""
Hot numeric kernels, with a numba path and a pure-numpy fallback.

The numba versions are used when numba imports cleanly and the environment
variable ``XYFREEZE_JIT`` is not set to ``0``.  Both paths are always
importable under explicit names (``*_numba`` / ``*_numpy``) so they can be
compared against each other in tests and benchmarks.
"""

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("XYFREEZE_JIT", "1") != "0"

#: above this size LAPACK's blocked LU beats the scalar loop (see benchmarks/)
JIT_SLOGDET_MAX_SIZE = 24


# ---------------------------------------------------------------------------
# signed log-determinant by LU with partial pivoting
# ---------------------------------------------------------------------------

def _slogdet_loop(m):
    a = m.copy()
    n = a.shape[0]
    sign = 1.0
    logabs = 0.0
    for k in range(n):
        p = k
        amax = abs(a[k, k])
        for r in range(k + 1, n):
            v = abs(a[r, k])
            if v > amax:
                amax = v
                p = r
        if amax == 0.0:
            return 0.0, -np.inf
        if p != k:
            for c in range(k, n):
                tmp = a[k, c]
                a[k, c] = a[p, c]
                a[p, c] = tmp
            sign = -sign
        piv = a[k, k]
        if piv < 0.0:
            sign = -sign
        logabs += np.log(abs(piv))
        for r in range(k + 1, n):
            f = a[r, k] / piv
            if f != 0.0:
                for c in range(k + 1, n):
                    a[r, c] -= f * a[k, c]
    return sign, logabs


def slogdet_numpy(stack):
    """Signed log|det| of a stack of square matrices via LAPACK getrf."""
    stack = np.asarray(stack, dtype=float)
    if stack.shape[-1] == 0:
        shape = stack.shape[:-2]
        return np.ones(shape), np.zeros(shape)
    return np.linalg.slogdet(stack)


if HAVE_NUMBA:
    _slogdet_jit = numba.njit(cache=True)(_slogdet_loop)

    @numba.njit(cache=True)
    def _slogdet_batch_jit(stack):
        nb = stack.shape[0]
        signs = np.empty(nb)
        logs = np.empty(nb)
        for b in range(nb):
            s, la = _slogdet_jit(stack[b])
            signs[b] = s
            logs[b] = la
        return signs, logs


def slogdet_numba(stack):
    """Signed log|det| of a stack of square matrices, numba LU kernel."""
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    stack = np.ascontiguousarray(stack, dtype=np.float64)
    lead = stack.shape[:-2]
    n = stack.shape[-1]
    if n == 0:
        return np.ones(lead), np.zeros(lead)
    flat = stack.reshape((-1, n, n))
    s, la = _slogdet_batch_jit(flat)
    return s.reshape(lead), la.reshape(lead)


def slogdet(stack):
    """Dispatch to the active ``slogdet`` implementation.

    Works on a single ``(n, n)`` matrix or any stack ``(..., n, n)``; returns
    ``(sign, log|det|)`` with the leading shape.  A singular matrix gives
    ``sign == 0`` and ``log|det| == -inf``.
    """
    if USE_NUMBA and np.shape(stack)[-1] <= JIT_SLOGDET_MAX_SIZE:
        return slogdet_numba(stack)
    return slogdet_numpy(stack)


def det(stack):
    sign, logabs = slogdet(stack)
    return sign * np.exp(logabs)


# ---------------------------------------------------------------------------
# conditional entropy after a projective measurement on the second qubit
# ---------------------------------------------------------------------------

def _cond_entropy_loop(rho, thetas, phis):
    nt = thetas.shape[0]
    nphi = phis.shape[0]
    out = np.empty((nt, nphi))
    for it in range(nt):
        st = np.sin(thetas[it])
        ct = np.cos(thetas[it])
        for ip in range(nphi):
            nx = st * np.cos(phis[ip])
            ny = st * np.sin(phis[ip])
            nz = ct
            total = 0.0
            for sgn in (1.0, -1.0):
                # projector (I + sgn n.sigma)/2 on qubit B
                p00 = 0.5 * (1.0 + sgn * nz)
                p11 = 0.5 * (1.0 - sgn * nz)
                p01 = 0.5 * sgn * complex(nx, -ny)
                p10 = 0.5 * sgn * complex(nx, ny)
                # unnormalised conditional state of A: sum_{b,b'} rho[a b, a' b'] P[b', b]
                r00 = 0j
                r01 = 0j
                r11 = 0j
                for b in range(2):
                    for bp in range(2):
                        if b == 0 and bp == 0:
                            pv = p00
                        elif b == 1 and bp == 1:
                            pv = p11
                        elif b == 0:
                            pv = p10
                        else:
                            pv = p01
                        r00 += rho[b, bp] * pv
                        r01 += rho[b, 2 + bp] * pv
                        r11 += rho[2 + b, 2 + bp] * pv
                prob = (r00 + r11).real
                if prob <= 1e-300:
                    continue
                a = r00.real / prob
                d = r11.real / prob
                c = abs(r01) / prob
                disc = np.sqrt((a - d) ** 2 + 4.0 * c * c)
                lam = min(max(0.5 * (1.0 + disc), 0.0), 1.0)
                h = 0.0
                if lam > 0.0:
                    h -= lam * np.log2(lam)
                if lam < 1.0:
                    h -= (1.0 - lam) * np.log2(1.0 - lam)
                total += prob * h
            out[it, ip] = total
    return out


def conditional_entropy_grid_numpy(rho, thetas, phis):
    """Average conditional entropy of qubit A over a (theta, phi) grid of
    projective measurements on qubit B.  Vectorised numpy version."""
    rho = np.asarray(rho, dtype=complex)
    th = np.asarray(thetas, dtype=float)[:, None]
    ph = np.asarray(phis, dtype=float)[None, :]
    nx = np.sin(th) * np.cos(ph)
    ny = np.sin(th) * np.sin(ph)
    nz = np.cos(th) * np.ones_like(ph)
    r = rho.reshape(2, 2, 2, 2)  # [a, b, a', b']
    total = np.zeros(np.broadcast(th, ph).shape)
    for sgn in (1.0, -1.0):
        proj = np.empty(nz.shape + (2, 2), dtype=complex)
        proj[..., 0, 0] = 0.5 * (1 + sgn * nz)
        proj[..., 1, 1] = 0.5 * (1 - sgn * nz)
        proj[..., 0, 1] = 0.5 * sgn * (nx - 1j * ny)
        proj[..., 1, 0] = 0.5 * sgn * (nx + 1j * ny)
        cond = np.einsum("xbyc,...cb->...xy", r, proj)
        prob = np.real(cond[..., 0, 0] + cond[..., 1, 1])
        safe = np.where(prob > 1e-300, prob, 1.0)
        a = np.real(cond[..., 0, 0]) / safe
        d = np.real(cond[..., 1, 1]) / safe
        c = np.abs(cond[..., 0, 1]) / safe
        lam = np.clip(0.5 * (1 + np.sqrt((a - d) ** 2 + 4 * c * c)), 0.0, 1.0)
        h = np.zeros_like(lam)
        for p in (lam, 1 - lam):
            h -= np.where(p > 0, p * np.log2(np.where(p > 0, p, 1.0)), 0.0)
        total += np.where(prob > 1e-300, prob * h, 0.0)
    return total


if HAVE_NUMBA:
    _cond_entropy_jit = numba.njit(cache=True)(_cond_entropy_loop)


def conditional_entropy_grid_numba(rho, thetas, phis):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not available")
    return _cond_entropy_jit(np.ascontiguousarray(rho, dtype=np.complex128),
                             np.ascontiguousarray(thetas, dtype=np.float64),
                             np.ascontiguousarray(phis, dtype=np.float64))


def conditional_entropy_grid(rho, thetas, phis):
    if USE_NUMBA:
        return conditional_entropy_grid_numba(rho, thetas, phis)
    return conditional_entropy_grid_numpy(rho, thetas, phis)
