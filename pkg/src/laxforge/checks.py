"""Numeric verification battery.

Each check recomputes a symbolic zero through an independent numeric route:
matrix products and commutators via numpy on evaluated coefficients, boundary
algebra via complex arithmetic on randomly drawn constants.  A report is a
plain dict so the CLI can emit it as canonical JSON; identical seeds produce
byte-identical reports.
"""
from __future__ import annotations

import random

import numpy as np

from .atoms import atom
from .hierarchy import (dress_u, extract_eom, generate_u, nls_v_operator,
                        verify_conservation)
from .oracle import ExponentialSolution, FieldSample, evaluate
from .riccati import solve_gamma, solve_w_z

_FIELDS = ("u", "uh", "pi", "pih")


def check_riccati(trials: int, tol: float, seed: int, order: int = 5) -> dict:
    """Per-order residual of the anti-diagonal system, assembled with numpy.

    For each k <= order-2 the five contributions (time derivative, both
    commutator parts, both quadratic convolutions, inhomogeneity) are
    evaluated separately and summed as complex matrices.
    """
    rng = random.Random(seed)
    results = {"scalar": 0.0, "matrix": 0.0}
    worst_seed = seed
    for mode in ("scalar", "matrix"):
        sol = solve_w_z(order, mode)
        W = {k: sol.w(k) for k in range(1, order + 1)}
        dW = {k: W[k].differentiate_t() for k in W}
        from .riccati import p_a_matrix, sigma_matrix, x_matrix, y_matrix
        X, PA = x_matrix(mode), p_a_matrix(mode)
        Sig = sigma_matrix(mode)
        YD_blocks = y_matrix(mode)  # diagonal part only is needed
        for _ in range(max(1, trials // 2)):
            s_seed = rng.randrange(2 ** 31)
            sample = FieldSample.random(s_seed, mode)
            point = (rng.uniform(-2, 2), rng.uniform(-2, 2))
            Xv = np.atleast_2d(evaluate(X, sample, point))
            PAv = np.atleast_2d(evaluate(PA, sample, point))
            Sv = np.atleast_2d(evaluate(Sig, sample, point))
            Yv = np.atleast_2d(evaluate(YD_blocks, sample, point))
            Yd = np.zeros_like(Yv)
            n = Xv.shape[0] // 2 if mode == "scalar" else sample.dims[0]
            Yd[:n, :n] = Yv[:n, :n]
            Yd[n:, n:] = Yv[n:, n:]
            Wv = {k: np.atleast_2d(evaluate(W[k], sample, point)) for k in W}
            dWv = {k: np.atleast_2d(evaluate(dW[k], sample, point)) for k in W}
            for k in range(-1, order - 1):
                r = np.zeros_like(Xv)
                if k >= 1:
                    r = r + dWv[k] + Wv[k] @ Yd - Yd @ Wv[k]
                if k + 2 <= order:
                    r = r + (Wv[k + 2] @ Sv - Sv @ Wv[k + 2]) / 2
                for a in range(1, k + 1):
                    b = k + 1 - a
                    if b >= 1:
                        r = r + Wv[a] @ Xv @ Wv[b]
                for a in range(1, k):
                    b = k - a
                    if b >= 1:
                        r = r + Wv[a] @ PAv @ Wv[b]
                if k == -1:
                    r = r - Xv
                if k == 0:
                    r = r - PAv
                d = float(np.max(np.abs(r)))
                if d > results[mode]:
                    results[mode] = d
                    worst_seed = s_seed
    max_abs = max(results.values())
    return {"name": "riccati", "order": order, "trials": trials, "tol": tol,
            "per_mode": results, "max_abs": max_abs, "worst_seed": worst_seed,
            "passed": max_abs < tol}


def check_gamma(trials: int, tol: float, seed: int, order: int = 5) -> dict:
    """Matrix Riccati recursion residual with numpy matrix arithmetic."""
    rng = random.Random(seed)
    sol = solve_gamma(order)
    G = {k: sol.gamma(k) for k in range(1, order + 1)}
    dG = {k: G[k].differentiate_t() for k in G}
    from .ncpoly import nc_mul
    from .riccati import _f
    u, uh, pi, pih = (_f(b, "matrix") for b in _FIELDS)
    uuh, uhu = nc_mul(u, uh), nc_mul(uh, u)
    max_abs, worst_seed = 0.0, seed
    for _ in range(max(1, trials)):
        s_seed = rng.randrange(2 ** 31)
        sample = FieldSample.random(s_seed, "matrix")
        point = (rng.uniform(-2, 2), rng.uniform(-2, 2))
        ev = lambda p: np.atleast_2d(evaluate(p, sample, point))
        Gv = {k: ev(G[k]) for k in G}
        dGv = {k: ev(dG[k]) for k in G}
        uv, uhv, piv, pihv = (
            np.atleast_2d(sample.atom_value(atom(b, mode="matrix"), *point))
            for b in _FIELDS)
        uuhv, uhuv = uv @ uhv, uhv @ uv
        for k in range(-1, order - 1):
            r = -Gv[k + 2] if k + 2 <= order else 0 * Gv[1]
            if k >= 1:
                r = r - dGv[k] + uuhv @ Gv[k] + Gv[k] @ uhuv
            for a in range(1, k):
                r = r - Gv[a] @ piv @ Gv[k - a]
            for a in range(1, k + 1):
                if k + 1 - a >= 1:
                    r = r - Gv[a] @ uhv @ Gv[k + 1 - a]
            if k == -1:
                r = r + uv
            if k == 0:
                r = r - pihv
            d = float(np.max(np.abs(r)))
            if d > max_abs:
                max_abs, worst_seed = d, s_seed
    return {"name": "gamma", "order": order, "trials": trials, "tol": tol,
            "max_abs": max_abs, "worst_seed": worst_seed, "passed": max_abs < tol}


def check_eom(trials: int, tol: float, seed: int) -> dict:
    """Zero-curvature residual of the second flow on exact exponential solutions."""
    rng = random.Random(seed)
    from .hierarchy import zero_curvature_residual
    res = zero_curvature_residual(generate_u(2, "scalar"), nls_v_operator("scalar"))
    max_abs, worst_seed = 0.0, seed
    for _ in range(trials):
        s_seed = rng.randrange(2 ** 31)
        sol = ExponentialSolution.random(s_seed)
        point = (rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        lam = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1, 1)
        v = evaluate(res, sol, point, lam=lam)
        d = float(np.max(np.abs(v)))
        if d > max_abs:
            max_abs, worst_seed = d, s_seed
    return {"name": "eom", "trials": trials, "tol": tol, "max_abs": max_abs,
            "worst_seed": worst_seed, "passed": max_abs < tol}


def check_dispersion(trials: int, tol: float, seed: int) -> dict:
    """EOM residual of the exponential family itself (dispersion relation)."""
    rng = random.Random(seed)
    rules = extract_eom(generate_u(2, "scalar"), nls_v_operator("scalar"))
    max_abs, worst_seed = 0.0, seed
    for _ in range(trials):
        s_seed = rng.randrange(2 ** 31)
        sol = ExponentialSolution.random(s_seed)
        point = (rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        for e in rules.evolution.values():
            d = float(abs(evaluate(e, sol, point)))
            if d > max_abs:
                max_abs, worst_seed = d, s_seed
    return {"name": "dispersion", "trials": trials, "tol": tol, "max_abs": max_abs,
            "worst_seed": worst_seed, "passed": max_abs < tol}


def check_conservation(trials: int, tol: float, seed: int, max_k: int = 3) -> dict:
    """Flux identity d_x rho = d_t j on exponential solutions for k <= max_k."""
    rng = random.Random(seed)
    pairs = []
    for k in range(1, max_k + 1):
        proof = verify_conservation(k)
        pairs.append((proof.density.differentiate_x(), proof.flux.differentiate_t()))
    max_abs, worst_seed = 0.0, seed
    for _ in range(trials):
        s_seed = rng.randrange(2 ** 31)
        sol = ExponentialSolution.random(s_seed)
        point = (rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
        for lhs, rhs in pairs:
            d = float(abs(evaluate(lhs, sol, point) - evaluate(rhs, sol, point)))
            if d > max_abs:
                max_abs, worst_seed = d, s_seed
    return {"name": "conservation", "trials": trials, "tol": tol, "max_abs": max_abs,
            "worst_seed": worst_seed, "passed": max_abs < tol}


def check_algebra(trials: int, tol: float, seed: int) -> dict:
    """Reflection equation and both linear Poisson structures, numerically."""
    rng = random.Random(seed)
    P = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            P[i * 2 + j, j * 2 + i] = 1

    def kmat(lam, xi, ka):
        return np.array([[lam + 1j * xi, 1j * ka * lam],
                         [1j * ka * lam, -lam + 1j * xi]], dtype=complex)

    max_abs, worst_seed = 0.0, seed
    eye = np.eye(2, dtype=complex)
    for _ in range(trials):
        s_seed = rng.randrange(2 ** 31)
        r2 = random.Random(s_seed)
        def c():
            return r2.uniform(-2, 2) + 1j * r2.uniform(-2, 2)
        lam, mu, xi, ka = c(), c(), c(), c()
        K1 = np.kron(kmat(lam, xi, ka), eye)
        K2 = np.kron(eye, kmat(mu, xi, ka))
        rm, rp = P / (lam - mu), P / (lam + mu)
        refl = rm @ K1 @ K2 - K1 @ K2 @ rm + K1 @ rp @ K2 - K2 @ rp @ K1
        d = float(np.max(np.abs(refl)))

        # Poisson: bracket matrix vs [P, L1 + L2] / (lam - mu)
        u, uh, pi, pih = c(), c(), c(), c()
        V = lambda l: np.array([[l * l / 2 - u * uh, l * uh + pi],
                                [l * u - pih, -l * l / 2 + u * uh]], dtype=complex)
        B = np.zeros((4, 4), dtype=complex)
        # nonzero brackets: {u,pi}={uh,pih}=1; d/dfield of V entries
        dV = {
            "u": lambda l: np.array([[-uh, 0], [l, uh]], dtype=complex),
            "uh": lambda l: np.array([[-u, l], [0, u]], dtype=complex),
            "pi": lambda l: np.array([[0, 1], [0, 0]], dtype=complex),
            "pih": lambda l: np.array([[0, 0], [-1, 0]], dtype=complex),
        }
        table = [("u", "pi", 1), ("pi", "u", -1), ("uh", "pih", 1), ("pih", "uh", -1)]
        for i in range(4):
            for j in range(4):
                acc = 0j
                for f, g, sgn in table:
                    acc += sgn * dV[f](lam)[i // 2, j // 2] * dV[g](mu)[i % 2, j % 2]
                B[i, j] = acc
        V1 = np.kron(V(lam), eye)
        V2 = np.kron(eye, V(mu))
        rhs = (P @ (V1 + V2) - (V1 + V2) @ P) / (lam - mu)
        d = max(d, float(np.max(np.abs(B - rhs))))
        if d > max_abs:
            max_abs, worst_seed = d, s_seed
    return {"name": "algebra", "trials": trials, "tol": tol, "max_abs": max_abs,
            "worst_seed": worst_seed, "passed": max_abs < tol}


def check_route(trials: int, tol: float, seed: int, max_n: int = 4) -> dict:
    """Generating vs dressing route, numerically, including the bare shift."""
    rng = random.Random(seed)
    ops = [(generate_u(n, "scalar").series, dress_u(n, "scalar").series, n)
           for n in range(1, max_n + 1)]
    max_abs, worst_seed = 0.0, seed
    for _ in range(trials):
        s_seed = rng.randrange(2 ** 31)
        sample = FieldSample.random(s_seed, "scalar")
        point = (rng.uniform(-2, 2), rng.uniform(-2, 2))
        lam = rng.uniform(0.5, 2.0) + 1j * rng.uniform(-1, 1)
        for gen, dre, n in ops:
            g = evaluate(gen, sample, point, lam=lam)
            h = evaluate(dre, sample, point, lam=lam)
            shift = lam ** (n - 1) / 2 * np.eye(2)
            d = float(np.max(np.abs(g - h - shift)))
            if d > max_abs:
                max_abs, worst_seed = d, s_seed
    return {"name": "route", "trials": trials, "tol": tol, "max_abs": max_abs,
            "worst_seed": worst_seed, "passed": max_abs < tol}


TARGETS = {
    "riccati": (check_riccati, check_gamma),
    "eom": (check_eom, check_dispersion),
    "conservation": (check_conservation,),
    "algebra": (check_algebra,),
    "route": (check_route,),
}


def run_numeric(target: str, trials: int, tol: float, seed: int) -> dict:
    """Run one target (or 'all'); returns a canonical report dict."""
    if target == "all":
        names = sorted(TARGETS)
    elif target in TARGETS:
        names = [target]
    else:
        raise ValueError(f"unknown target {target!r}")
    checks = []
    for name in names:
        for fn in TARGETS[name]:
            checks.append(fn(trials, tol, seed))
    checks = [{k: (bool(v) if k == "passed" else v) for k, v in c.items()}
              for c in checks]
    return {"target": target, "trials": trials, "tol": tol, "seed": seed,
            "checks": checks, "passed": all(c["passed"] for c in checks)}
