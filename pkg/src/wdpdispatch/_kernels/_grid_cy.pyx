# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scan of the water-output box for the brute-force solver."""


def scan_box(double g,
             double wh_lo, double wh_hi, Py_ssize_t n_h,
             double wr_lo, double wr_hi, Py_ssize_t n_r,
             double alpha_h, double eta_h, double alpha_r,
             double pi_plus, double pi_minus, double pi_zero, double pi_w,
             double cost_a, double cost_b, double cost_c):
    """Best (profit, w_h, w_r) over an n_h x n_r grid of the water box.

    Profit ties are broken toward larger w_h, then larger w_r, so the result
    is deterministic and matches the numpy fallback point for point.
    """
    cdef double step_h = 0.0
    cdef double step_r = 0.0
    if n_h > 1:
        step_h = (wh_hi - wh_lo) / (n_h - 1)
    if n_r > 1:
        step_r = (wr_hi - wr_lo) / (n_r - 1)

    cdef double best_profit = -1.7976931348623157e308
    cdef double best_wh = wh_lo
    cdef double best_wr = wr_lo
    cdef Py_ssize_t i, j
    cdef double wh, wr, p, cost, base, qh, z, pay, value
    for i in range(n_h):
        wh = wh_lo + step_h * i
        p = wh / alpha_h
        cost = (cost_a * p + cost_b) * p + cost_c
        base = pi_w * wh - cost
        qh = wh / eta_h
        for j in range(n_r):
            wr = wr_lo + step_r * j
            z = (wr / alpha_r - qh) - g
            if z > 0.0:
                pay = pi_plus * z
            else:
                pay = pi_minus * z
            value = (base + pi_w * wr) - pay - pi_zero
            if value > best_profit or (
                value == best_profit
                and (wh > best_wh or (wh == best_wh and wr > best_wr))
            ):
                best_profit = value
                best_wh = wh
                best_wr = wr
    return best_profit, best_wh, best_wr
