"""Exact Riemann solver for the 1D ideal-gas Euler equations.

Standard construction: Newton iteration for the star-region pressure using
two-rarefaction/two-shock flux functions, then self-similar sampling.
Used as an independent oracle for shock-tube tests.
"""

from __future__ import annotations

import numpy as np


def _flux_function(p, rho_k, p_k, gamma):
    """f_K(p) and its derivative for one side of the star region."""
    a_k = np.sqrt(gamma * p_k / rho_k)
    if p > p_k:  # shock
        A = 2.0 / ((gamma + 1.0) * rho_k)
        B = (gamma - 1.0) / (gamma + 1.0) * p_k
        f = (p - p_k) * np.sqrt(A / (p + B))
        df = np.sqrt(A / (B + p)) * (1.0 - (p - p_k) / (2.0 * (B + p)))
    else:  # rarefaction
        f = 2.0 * a_k / (gamma - 1.0) * ((p / p_k) ** ((gamma - 1.0) / (2.0 * gamma)) - 1.0)
        df = 1.0 / (rho_k * a_k) * (p / p_k) ** (-(gamma + 1.0) / (2.0 * gamma))
    return f, df


def star_state(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma):
    """Pressure and velocity in the star region (Newton iteration)."""
    du = u_r - u_l
    p = max(0.5 * (p_l + p_r), 1e-8)
    for _ in range(100):
        f_l, df_l = _flux_function(p, rho_l, p_l, gamma)
        f_r, df_r = _flux_function(p, rho_r, p_r, gamma)
        g = f_l + f_r + du
        dp = -g / (df_l + df_r)
        p_new = max(p + dp, 1e-12)
        if abs(p_new - p) < 1e-14 * p:
            p = p_new
            break
        p = p_new
    f_l, _ = _flux_function(p, rho_l, p_l, gamma)
    f_r, _ = _flux_function(p, rho_r, p_r, gamma)
    u = 0.5 * (u_l + u_r) + 0.5 * (f_r - f_l)
    return p, u


def sample(xi, rho_l, u_l, p_l, rho_r, u_r, p_r, gamma):
    """Solution (rho, u, p) at similarity coordinate xi = x/t."""
    p_star, u_star = star_state(rho_l, u_l, p_l, rho_r, u_r, p_r, gamma)
    a_l = np.sqrt(gamma * p_l / rho_l)
    a_r = np.sqrt(gamma * p_r / rho_r)
    gm, gp = gamma - 1.0, gamma + 1.0

    if xi <= u_star:  # left of contact
        if p_star > p_l:  # left shock
            rho_sl = rho_l * ((p_star / p_l + gm / gp) / (gm / gp * p_star / p_l + 1.0))
            s_l = u_l - a_l * np.sqrt(gp / (2 * gamma) * p_star / p_l + gm / (2 * gamma))
            if xi < s_l:
                return rho_l, u_l, p_l
            return rho_sl, u_star, p_star
        # left rarefaction
        a_star = a_l * (p_star / p_l) ** (gm / (2 * gamma))
        head, tail = u_l - a_l, u_star - a_star
        if xi < head:
            return rho_l, u_l, p_l
        if xi > tail:
            return rho_l * (p_star / p_l) ** (1.0 / gamma), u_star, p_star
        u = 2.0 / gp * (a_l + gm / 2.0 * u_l + xi)
        a = 2.0 / gp * (a_l + gm / 2.0 * (u_l - xi))
        rho = rho_l * (a / a_l) ** (2.0 / gm)
        return rho, u, rho * a * a / gamma
    # right of contact
    if p_star > p_r:  # right shock
        rho_sr = rho_r * ((p_star / p_r + gm / gp) / (gm / gp * p_star / p_r + 1.0))
        s_r = u_r + a_r * np.sqrt(gp / (2 * gamma) * p_star / p_r + gm / (2 * gamma))
        if xi > s_r:
            return rho_r, u_r, p_r
        return rho_sr, u_star, p_star
    # right rarefaction
    a_star = a_r * (p_star / p_r) ** (gm / (2 * gamma))
    head, tail = u_r + a_r, u_star + a_star
    if xi > head:
        return rho_r, u_r, p_r
    if xi < tail:
        return rho_r * (p_star / p_r) ** (1.0 / gamma), u_star, p_star
    u = 2.0 / gp * (-a_r + gm / 2.0 * u_r + xi)
    a = 2.0 / gp * (a_r - gm / 2.0 * (u_r - xi))
    rho = rho_r * (a / a_r) ** (2.0 / gm)
    return rho, u, rho * a * a / gamma


def solve(x, t, left, right, gamma):
    """Vectorized exact solution at positions x and time t > 0."""
    rho = np.empty_like(x, dtype=float)
    u = np.empty_like(rho)
    p = np.empty_like(rho)
    for i, xi in enumerate(np.asarray(x, dtype=float) / t):
        rho[i], u[i], p[i] = sample(xi, *left, *right, gamma)
    return rho, u, p
