"""Compiled inner loops.

Everything here works in place on flat complex128 amplitude arrays where
qubit ``q`` is bit ``q`` (least significant first) of the basis index.
The public wrappers in the other modules validate arguments; these
functions trust them.
"""
import numpy as np
from numba import njit

_TWO_PI = 2.0 * np.pi
_PHASE_EQ = np.exp(0.25j * np.pi)
_PHASE_NE = np.exp(-0.25j * np.pi)

# Status codes returned by als_sweeps.
ALS_CONVERGED = 0
ALS_MAX_SWEEPS = 1
ALS_DEGENERATE = 2


@njit(cache=True, nogil=True)
def u1_entries(x, g1, g2):
    """Entries (a, b, c, d) of the rotation [[a, b], [c, d]] built from three uniforms."""
    sx = np.sqrt(x)
    s1x = np.sqrt(1.0 - x)
    e1 = np.cos(_TWO_PI * g1) + 1j * np.sin(_TWO_PI * g1)
    e2 = np.cos(_TWO_PI * g2) + 1j * np.sin(_TWO_PI * g2)
    a = e1 * s1x
    b = e2 * sx
    c = -np.conj(e2) * sx
    d = np.conj(e1) * s1x
    return a, b, c, d


@njit(cache=True, nogil=True)
def apply_1q(psi, a, b, c, d, q):
    stride = 1 << q
    dim = psi.shape[0]
    for start in range(0, dim, 2 * stride):
        for i0 in range(start, start + stride):
            i1 = i0 + stride
            x0 = psi[i0]
            x1 = psi[i1]
            psi[i0] = a * x0 + b * x1
            psi[i1] = c * x0 + d * x1


@njit(cache=True, nogil=True)
def apply_cphase(psi, i, j):
    for idx in range(psi.shape[0]):
        if ((idx >> i) & 1) == ((idx >> j) & 1):
            psi[idx] *= _PHASE_EQ
        else:
            psi[idx] *= _PHASE_NE


@njit(cache=True, nogil=True)
def evolve(psi, pairs, draws, counters):
    """Run one scheme step per row of ``draws`` (7 uniforms each).

    Row layout: pair selector, then (x, g1, g2) for the first qubit of the
    pair, then (x, g1, g2) for the second. ``counters`` accumulates
    [two-qubit gates, single-qubit gates].
    """
    npairs = pairs.shape[0]
    for s in range(draws.shape[0]):
        k = int(draws[s, 0] * npairs)
        if k >= npairs:
            k = npairs - 1
        i = pairs[k, 0]
        j = pairs[k, 1]
        apply_cphase(psi, i, j)
        counters[0] += 1
        a, b, c, d = u1_entries(draws[s, 1], draws[s, 2], draws[s, 3])
        apply_1q(psi, a, b, c, d, i)
        a, b, c, d = u1_entries(draws[s, 4], draws[s, 5], draws[s, 6])
        apply_1q(psi, a, b, c, d, j)
        counters[1] += 2


@njit(cache=True, nogil=True)
def reduced_density(psi, q):
    """(rho00, rho11, rho01) of qubit q; rho10 is the conjugate of rho01."""
    stride = 1 << q
    dim = psi.shape[0]
    r00 = 0.0
    r11 = 0.0
    r01 = 0.0 + 0.0j
    for start in range(0, dim, 2 * stride):
        for i0 in range(start, start + stride):
            x0 = psi[i0]
            x1 = psi[i0 + stride]
            r00 += x0.real * x0.real + x0.imag * x0.imag
            r11 += x1.real * x1.real + x1.imag * x1.imag
            r01 += x0 * np.conj(x1)
    return r00, r11, r01


@njit(cache=True, nogil=True)
def purity_sum(psi, n):
    total = 0.0
    for q in range(n):
        r00, r11, r01 = reduced_density(psi, q)
        total += r00 * r00 + r11 * r11 + 2.0 * (r01.real * r01.real + r01.imag * r01.imag)
    return total


@njit(cache=True, nogil=True)
def _contract_top(src, m, f0, f1, dst):
    # src has length 2**m; contract its highest bit with conj(f).
    half = 1 << (m - 1)
    c0 = np.conj(f0)
    c1 = np.conj(f1)
    for idx in range(half):
        dst[idx] = c0 * src[idx] + c1 * src[idx + half]


@njit(cache=True, nogil=True)
def _contract_low(src, m, f0, f1, dst):
    # src has length 2**m; contract its lowest bit with conj(f).
    half = 1 << (m - 1)
    c0 = np.conj(f0)
    c1 = np.conj(f1)
    for idx in range(half):
        dst[idx] = c0 * src[2 * idx] + c1 * src[2 * idx + 1]


@njit(cache=True, nogil=True)
def environment(psi, phi, q, scratch_a, scratch_b):
    """Contract psi with conj(phi[k]) for every k != q; returns the 2-vector."""
    n = phi.shape[0]
    cur = psi
    m = n
    use_a = True
    for k in range(n - 1, q, -1):
        dst = scratch_a if use_a else scratch_b
        _contract_top(cur, m, phi[k, 0], phi[k, 1], dst)
        cur = dst
        use_a = not use_a
        m -= 1
    for k in range(q):
        dst = scratch_a if use_a else scratch_b
        _contract_low(cur, m, phi[k, 0], phi[k, 1], dst)
        cur = dst
        use_a = not use_a
        m -= 1
    return cur[0], cur[1]


@njit(cache=True, nogil=True)
def overlap(psi, phi, scratch_a, scratch_b):
    """<phi|psi> for the product state phi."""
    e0, e1 = environment(psi, phi, 0, scratch_a, scratch_b)
    return np.conj(phi[0, 0]) * e0 + np.conj(phi[0, 1]) * e1


@njit(cache=True, nogil=True)
def als_sweeps(psi, phi, max_sweeps, tol, start_overlap, tops, low_a, low_b, degenerate_eps,
               spares, spare_pos):
    """Alternating single-factor maximisation of |<phi|psi>| over product phi.

    ``phi`` (n x 2) is updated in place. ``tops`` holds 2**(n+1) scratch
    amplitudes used for the cached top-bit contractions of one sweep.
    A factor whose environment vanishes is replaced by the next row of
    ``spares`` (position kept in ``spare_pos[0]``) and the sweep goes on;
    ALS_DEGENERATE is returned only once the spares run out.

    Returns (status, overlap, sweeps_done, worst_step) where worst_step is
    the most negative overlap change seen over regular single-factor updates.
    """
    n = phi.shape[0]
    dim = psi.shape[0]
    current = start_overlap
    worst = np.inf
    for sweep in range(max_sweeps):
        before = current
        replaced = False
        # tops[offset(q) : offset(q) + 2**(q+1)] = psi contracted on bits q+1..n-1
        off = dim
        tops[dim:2 * dim] = psi
        offsets = np.empty(n, dtype=np.int64)
        offsets[n - 1] = dim
        m = n
        for k in range(n - 1, 0, -1):
            new_off = off - (1 << (m - 1))
            _contract_top(tops[off:off + (1 << m)], m, phi[k, 0], phi[k, 1],
                          tops[new_off:new_off + (1 << (m - 1))])
            off = new_off
            m -= 1
            offsets[k - 1] = off
        for q in range(n):
            cur = tops[offsets[q]:offsets[q] + (1 << (q + 1))]
            m = q + 1
            use_a = True
            for k in range(q):
                dst = low_a if use_a else low_b
                _contract_low(cur, m, phi[k, 0], phi[k, 1], dst)
                cur = dst
                use_a = not use_a
                m -= 1
            e0 = cur[0]
            e1 = cur[1]
            norm = np.sqrt(e0.real * e0.real + e0.imag * e0.imag
                           + e1.real * e1.real + e1.imag * e1.imag)
            if norm <= degenerate_eps:
                if spare_pos[0] >= spares.shape[0]:
                    return ALS_DEGENERATE, current, sweep, worst
                phi[q, 0] = spares[spare_pos[0], 0]
                phi[q, 1] = spares[spare_pos[0], 1]
                spare_pos[0] += 1
                # any factor gives zero overlap against a vanishing environment
                current = 0.0
                replaced = True
                continue
            phi[q, 0] = e0 / norm
            phi[q, 1] = e1 / norm
            step = norm - current
            if step < worst:
                worst = step
            current = norm
        if not replaced and (current - before < tol or current >= 1.0 - tol):
            return ALS_CONVERGED, current, sweep + 1, worst
    return ALS_MAX_SWEEPS, current, max_sweeps, worst
