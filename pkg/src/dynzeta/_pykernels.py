"""Pure numpy implementation of the Euler-product inner loop.

Same signature and semantics as the compiled ``_ckernels`` module; used
when the extension is unavailable or DYNZETA_PURE_PYTHON is set.
"""

from __future__ import annotations

import numpy as np


def euler_log_sum(lengths, angles, chi, n_max, weights, wmult, s, shift, with_denominator):
    """Sum over geodesics g and powers n = 1..n_max[g] of

        (1/n) * tr chi(g^n) * tr sigma(m_g^n) * exp(-n (s + shift) l_g) / den_n

    with tr chi(g^n) = sum_j chi[g, j]^n, tr sigma(m^n) = sum_w wmult[w] exp(i n <weights[w], angles[g]>)
    and den_n = prod_j |1 - exp(-n l_g + i n angles[g, j])|^2 when ``with_denominator``, else 1.
    """
    s = complex(s)
    total = 0j
    for g in range(len(lengths)):
        N = int(n_max[g])
        if N <= 0:
            continue
        l = float(lengths[g])
        n = np.arange(1, N + 1, dtype=float)
        z = chi[g] * np.exp(-(s + shift) * l)
        tr_chi = (z[None, :] ** n[:, None]).sum(axis=1)
        phase = weights @ angles[g]
        tr_sigma = (wmult[None, :] * np.exp(1j * n[:, None] * phase[None, :])).sum(axis=1)
        term = tr_chi * tr_sigma / n
        if with_denominator:
            x = np.exp(-n * l)
            den = np.prod(1.0 - 2.0 * x[:, None] * np.cos(n[:, None] * angles[g][None, :]) + (x * x)[:, None], axis=1)
            term = term / den
        total += term.sum()
    return complex(total)
