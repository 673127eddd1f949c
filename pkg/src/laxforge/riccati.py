"""Order-by-order solution of the time Riccati system.

The time part of the auxiliary linear problem factorizes through
``(1 + W) e^Z (1 + W)^-1`` with W strictly anti-diagonal and Z diagonal.
Expanding W = sum_n W^(n)/lam^n, the lam^2-leading commutator with the
constant signature matrix fixes each W^(k+2) algebraically from lower
orders; the diagonal phase densities follow from Z' = V_D + V_A W.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .atoms import ShapeError, atom
from .coeff import gr
from .matrices import PolyMatrix
from .ncpoly import NCPolynomial, nc_mul
from .series import LaurentSeries

BLOCK_DIMS = {"scalar": ("1", "1"), "matrix": ("N", "M")}


def _f(base, mode, dt=0, dx=0, flow=2) -> NCPolynomial:
    return NCPolynomial.from_atom(atom(base, dt, dx, mode, flow), mode)


def _blk_zero(mode, r, c):
    return NCPolynomial.zero(mode, (r, c))


def sigma_matrix(mode: str) -> PolyMatrix:
    """diag(I, -I) on the (N, M) block split."""
    n, m = BLOCK_DIMS[mode]
    return PolyMatrix.diag(mode, (n, m),
                           [NCPolynomial.unit(mode, n),
                            NCPolynomial.unit(mode, m, gr(-1))])


def projector_d(mode: str) -> PolyMatrix:
    """diag(I, 0) on the (N, M) block split."""
    n, m = BLOCK_DIMS[mode]
    return PolyMatrix.diag(mode, (n, m),
                           [NCPolynomial.unit(mode, n), _blk_zero(mode, m, m)])


def omega_matrix(mode: str = "scalar") -> PolyMatrix:
    """antidiag(i, -i); the involution used by the reflected monodromy."""
    n, m = BLOCK_DIMS[mode]
    if mode != "scalar":
        raise ShapeError("the reflected-monodromy involution is scalar-mode only")
    i = gr(0, 1)
    return PolyMatrix(mode, (n, m), (n, m),
                      [[_blk_zero(mode, n, n), NCPolynomial.unit(mode, "1", i)],
                       [NCPolynomial.unit(mode, "1", -i), _blk_zero(mode, m, m)]])


def x_matrix(mode: str) -> PolyMatrix:
    """Anti-diagonal field matrix [[0, uh], [u, 0]]."""
    n, m = BLOCK_DIMS[mode]
    return PolyMatrix(mode, (n, m), (n, m),
                      [[_blk_zero(mode, n, n), _f("uh", mode)],
                       [_f("u", mode), _blk_zero(mode, m, m)]])


def y_matrix(mode: str) -> PolyMatrix:
    """[[-uh*u, pi], [-pih, u*uh]]: the lam^0 part of the time Lax operator."""
    n, m = BLOCK_DIMS[mode]
    uhu = nc_mul(_f("uh", mode), _f("u", mode))
    uuh = nc_mul(_f("u", mode), _f("uh", mode))
    return PolyMatrix(mode, (n, m), (n, m),
                      [[-uhu, _f("pi", mode)],
                       [-_f("pih", mode), uuh]])


def p_a_matrix(mode: str) -> PolyMatrix:
    """Anti-diagonal momentum matrix [[0, pi], [-pih, 0]]."""
    n, m = BLOCK_DIMS[mode]
    return PolyMatrix(mode, (n, m), (n, m),
                      [[_blk_zero(mode, n, n), _f("pi", mode)],
                       [-_f("pih", mode), _blk_zero(mode, m, m)]])


def nls_v(mode: str = "scalar") -> LaurentSeries:
    """The time Lax operator: lam^2/2 Sigma + lam X + Y (exact in lam)."""
    half = gr(Fraction(1, 2))
    return (LaurentSeries.of(sigma_matrix(mode).scale(half), 2)
            + LaurentSeries.of(x_matrix(mode), 1)
            + LaurentSeries.of(y_matrix(mode), 0))


def v_diagonal(mode: str) -> LaurentSeries:
    half = gr(Fraction(1, 2))
    n, m = BLOCK_DIMS[mode]
    yd = PolyMatrix.diag(mode, (n, m),
                         [-nc_mul(_f("uh", mode), _f("u", mode)),
                          nc_mul(_f("u", mode), _f("uh", mode))])
    return LaurentSeries.of(sigma_matrix(mode).scale(half), 2) + LaurentSeries.of(yd, 0)


def v_antidiagonal(mode: str) -> LaurentSeries:
    return LaurentSeries.of(x_matrix(mode), 1) + LaurentSeries.of(p_a_matrix(mode), 0)


@dataclass
class RiccatiSolution:
    """W^(1..order) anti-diagonal blocks and Z^(1..order-1) diagonal densities.

    ``z_lam2_density`` is the field-independent lam^2 term Sigma/2, kept as
    metadata rather than a density since it integrates to the interval length.
    """
    mode: str
    order: int
    w_coeffs: list[PolyMatrix]
    z_coeffs: list[PolyMatrix]
    z_lam2_density: PolyMatrix

    def w(self, k: int) -> PolyMatrix:
        if not 1 <= k <= self.order:
            raise IndexError(f"W^({k}) not computed (order {self.order})")
        return self.w_coeffs[k - 1]

    def z(self, k: int) -> PolyMatrix:
        if not 1 <= k <= self.order - 1:
            raise IndexError(f"Z^({k}) not computed (order {self.order})")
        return self.z_coeffs[k - 1]

    def w_series(self, truncation: int | None = None) -> LaurentSeries:
        t = self.order if truncation is None else min(truncation, self.order)
        coeffs = {-k: self.w_coeffs[k - 1] for k in range(1, t + 1)}
        n, m = BLOCK_DIMS[self.mode]
        return LaurentSeries(self.mode, (n, m), (n, m), coeffs, t)

    def one_plus_w(self, truncation: int | None = None) -> LaurentSeries:
        n, m = BLOCK_DIMS[self.mode]
        w = self.w_series(truncation)
        return LaurentSeries.identity(self.mode, (n, m), truncation=w.truncation) + w


@lru_cache(maxsize=None)
def solve_w_z(order: int, mode: str = "scalar") -> RiccatiSolution:
    """Solve the anti-diagonal/diagonal system to the requested order.

    Integration constants at each order are fixed to zero: every W^(k) is a
    differential polynomial in the fields with no free constants.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if mode not in BLOCK_DIMS:
        raise ValueError(f"unknown mode {mode!r}")
    n, m = BLOCK_DIMS[mode]
    X = x_matrix(mode)
    PA = p_a_matrix(mode)
    uhu = nc_mul(_f("uh", mode), _f("u", mode))
    uuh = nc_mul(_f("u", mode), _f("uh", mode))
    YD = PolyMatrix.diag(mode, (n, m), [-uhu, uuh])
    zero = PolyMatrix.zero(mode, (n, m), (n, m))
    W: dict[int, PolyMatrix] = {0: zero}

    def getw(k):
        return W.get(k, zero)

    for k in range(-1, order - 1):
        rhs = -getw(k).differentiate_t() - getw(k).commutator(YD)
        for a in range(1, k + 1):
            b = k + 1 - a
            if b >= 1:
                rhs = rhs - getw(a) * X * getw(b)
        for a in range(1, k):
            b = k - a
            if b >= 1:
                rhs = rhs - getw(a) * PA * getw(b)
        if k == -1:
            rhs = rhs + X
        if k == 0:
            rhs = rhs + PA
        # (1/2)[W^(k+2), Sigma] = rhs  =>  W12 = -rhs12, W21 = +rhs21
        w12 = -rhs.entries[0][1]
        w21 = rhs.entries[1][0]
        W[k + 2] = PolyMatrix(mode, (n, m), (n, m),
                              [[_blk_zero(mode, n, n), w12],
                               [w21, _blk_zero(mode, m, m)]])

    z_coeffs = []
    for k in range(1, order):
        density = X * W[k + 1] + PA * W[k]
        if not density.is_diagonal():
            raise RuntimeError(f"Z^({k}) density is not diagonal")
        z_coeffs.append(density)
    half = gr(Fraction(1, 2))
    return RiccatiSolution(mode, order, [W[k] for k in range(1, order + 1)],
                           z_coeffs, sigma_matrix(mode).scale(half))


def riccati_residual(sol: RiccatiSolution) -> LaurentSeries:
    """dW/dt + [W, V_D] + W V_A W - V_A with the truncated series W."""
    Wser = sol.w_series()
    VD = v_diagonal(sol.mode)
    VA = v_antidiagonal(sol.mode)
    return (Wser.differentiate_t() + Wser.commutator(VD.truncated(Wser.truncation))
            + Wser * VA.truncated(Wser.truncation) * Wser - VA.truncated(Wser.truncation))


@dataclass
class GammaSolution:
    """Off-diagonal ratio blocks of the auxiliary problem, order by order."""
    which: str  # 'gamma' (M x N) or 'gamma_hat' (N x M)
    order: int
    coeffs: list[NCPolynomial]

    def gamma(self, k: int) -> NCPolynomial:
        if not 1 <= k <= self.order:
            raise IndexError(f"coefficient {k} not computed (order {self.order})")
        return self.coeffs[k - 1]


@lru_cache(maxsize=None)
def solve_gamma(order: int, which: str = "gamma") -> GammaSolution:
    """Matrix Riccati recursion for the ratio of auxiliary-function blocks."""
    if order < 1:
        raise ValueError("order must be >= 1")
    mode = "matrix"
    u, uh, pi, pih = (_f(b, mode) for b in ("u", "uh", "pi", "pih"))
    uuh, uhu = nc_mul(u, uh), nc_mul(uh, u)
    if which == "gamma":
        shape, lead1, lead2 = ("M", "N"), u, -pih
        left, right, quad0, quad1 = uuh, uhu, pi, uh
        sign = 1
    elif which == "gamma_hat":
        shape, lead1, lead2 = ("N", "M"), -uh, -pi
        left, right, quad0, quad1 = uhu, uuh, pih, u
        sign = -1
    else:
        raise ValueError("which must be 'gamma' or 'gamma_hat'")
    zero = NCPolynomial.zero(mode, shape)
    G: dict[int, NCPolynomial] = {0: zero}

    def getg(k):
        return G.get(k, zero)

    for k in range(-1, order - 1):
        if which == "gamma":
            val = (-getg(k).differentiate_t() + left * getg(k) + getg(k) * right)
            for a in range(1, k):
                val = val - getg(a) * quad0 * getg(k - a)
            for a in range(1, k + 1):
                if k + 1 - a >= 1:
                    val = val - getg(a) * quad1 * getg(k + 1 - a)
            if k == -1:
                val = val + u
            if k == 0:
                val = val - pih
        else:
            val = (getg(k).differentiate_t() + left * getg(k) + getg(k) * right)
            for a in range(1, k):
                val = val - getg(a) * quad0 * getg(k - a)
            for a in range(1, k + 1):
                if k + 1 - a >= 1:
                    val = val + getg(a) * quad1 * getg(k + 1 - a)
            if k == -1:
                val = val - uh
            if k == 0:
                val = val - pi
        G[k + 2] = val
    return GammaSolution(which, order, [G[k] for k in range(1, order + 1)])


def gamma_residual(sol: GammaSolution) -> LaurentSeries:
    """Residual of the matrix Riccati equation with the truncated series."""
    mode = "matrix"
    u, uh, pi, pih = (_f(b, mode) for b in ("u", "uh", "pi", "pih"))
    t = sol.order
    if sol.which == "gamma":
        r_dims, c_dims = ("M",), ("N",)
    else:
        r_dims, c_dims = ("N",), ("M",)
    gser = LaurentSeries(mode, r_dims, c_dims,
                         {-k: PolyMatrix(mode, r_dims, c_dims, [[sol.coeffs[k - 1]]])
                          for k in range(1, t + 1)}, t)

    def as_series(poly, rd, cd, power=0):
        return LaurentSeries.of(PolyMatrix(mode, rd, cd, [[poly]]), power).truncated(t)

    half = gr(Fraction(1, 2))
    if sol.which == "gamma":
        lin_left = as_series(nc_mul(u, uh), ("M",), ("M",)) \
            - LaurentSeries.identity(mode, ("M",)).shift(2).truncated(t) * half
        lin_right = as_series(nc_mul(uh, u), ("N",), ("N",)) \
            - LaurentSeries.identity(mode, ("N",)).shift(2).truncated(t) * half
        inhom = as_series(u, ("M",), ("N",), 1) - as_series(pih, ("M",), ("N",))
        quad = as_series(pi, ("N",), ("M",)) + as_series(uh, ("N",), ("M",), 1)
        return (gser.differentiate_t() - inhom - lin_left * gser - gser * lin_right
                + gser * quad * gser)
    lin_left = -as_series(nc_mul(uh, u), ("N",), ("N",)) \
        + LaurentSeries.identity(mode, ("N",)).shift(2).truncated(t) * half
    lin_right = -as_series(nc_mul(u, uh), ("M",), ("M",)) \
        + LaurentSeries.identity(mode, ("M",)).shift(2).truncated(t) * half
    inhom = as_series(uh, ("N",), ("M",), 1) + as_series(pi, ("N",), ("M",))
    quad = as_series(pih, ("M",), ("N",)) - as_series(u, ("M",), ("N",), 1)
    return (gser.differentiate_t() - inhom - lin_left * gser - gser * lin_right
            - gser * quad * gser)
