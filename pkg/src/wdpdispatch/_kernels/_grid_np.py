"""Vectorized numpy fallback for the water-box scan."""

import numpy as np


def scan_box(g,
             wh_lo, wh_hi, n_h,
             wr_lo, wr_hi, n_r,
             alpha_h, eta_h, alpha_r,
             pi_plus, pi_minus, pi_zero, pi_w,
             cost_a, cost_b, cost_c):
    """Best (profit, w_h, w_r) over an n_h x n_r grid of the water box.

    Mirrors the compiled kernel expression for expression so both backends
    evaluate identical grids with identical arithmetic, and applies the same
    tie-break toward larger w_h, then larger w_r.
    """
    step_h = (wh_hi - wh_lo) / (n_h - 1) if n_h > 1 else 0.0
    step_r = (wr_hi - wr_lo) / (n_r - 1) if n_r > 1 else 0.0
    wh = wh_lo + step_h * np.arange(n_h, dtype=np.float64)
    wr = wr_lo + step_r * np.arange(n_r, dtype=np.float64)

    p = wh / alpha_h
    cost = (cost_a * p + cost_b) * p + cost_c
    base = pi_w * wh - cost
    qh = wh / eta_h

    z = (wr[None, :] / alpha_r - qh[:, None]) - g
    pay = np.where(z > 0.0, pi_plus * z, pi_minus * z)
    value = (base[:, None] + pi_w * wr[None, :]) - pay - pi_zero

    best = value.max()
    rows, cols = np.nonzero(value == best)
    i = rows.max()
    j = cols[rows == i].max()
    return float(value[i, j]), float(wh[i]), float(wr[j])
