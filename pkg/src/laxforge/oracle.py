"""Independent numeric verification of the symbolic results.

Random smooth fields are trigonometric polynomials in (t, x): closed under
differentiation and exactly evaluable to machine precision, so every check is
a pointwise identity evaluation (never an x-evolution of the PDE, which is
ill-posed).  Matrix products and commutators on the numeric side go through
numpy, keeping the route independent of the symbolic multiplication.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .atoms import FieldAtom
from .coeff import GaussianRational
from .matrices import PolyMatrix
from .ncpoly import NCPolynomial, TracePolynomial
from .ratfunc import RatFunc
from .series import LaurentSeries

MAX_MODES = 8


class UnhousedAtomError(ValueError):
    """An atom with no evaluator (e.g. a kernel block that was not eliminated)."""


@dataclass(frozen=True)
class TrigPoly:
    """Sum of complex exponentials a * exp(i(w t + k x)); derivatives exact."""
    modes: tuple[tuple[complex, tuple[int, int]], ...]

    def value(self, t: float, x: float, dt: int = 0, dx: int = 0) -> complex:
        out = 0j
        for a, (w, k) in self.modes:
            out += a * (1j * w) ** dt * (1j * k) ** dx * np.exp(1j * (w * t + k * x))
        return out


def _random_trig(rng: random.Random) -> TrigPoly:
    n = rng.randint(1, MAX_MODES)
    modes = []
    for _ in range(n):
        amp = (rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)) / 2
        modes.append((amp, (rng.randint(-2, 2), rng.randint(-2, 2))))
    return TrigPoly(tuple(modes))


@dataclass
class FieldSample:
    """Independent trig polynomials per field; scalar or small-matrix mode."""
    seed: int
    mode: str = "scalar"
    dims: tuple[int, int] = (2, 1)  # concrete sizes for the symbolic N and M
    fields: dict = field(default_factory=dict)

    @staticmethod
    def random(seed: int, mode: str = "scalar", dims: tuple[int, int] = (2, 1)) -> "FieldSample":
        rng = random.Random(seed)
        fields = {}
        for base in ("u", "uh", "pi", "pih"):
            if mode == "scalar":
                fields[base] = _random_trig(rng)
            else:
                r, c = _concrete_shape(base, dims)
                fields[base] = [[_random_trig(rng) for _ in range(c)] for _ in range(r)]
        return FieldSample(seed, mode, dims, fields)

    def dim_of(self, d: str) -> int:
        return {"N": self.dims[0], "M": self.dims[1], "1": 1}[d]

    def atom_value(self, a: FieldAtom, t: float, x: float):
        if a.base not in self.fields:
            raise UnhousedAtomError(f"no evaluator for atom {a}")
        f = self.fields[a.base]
        if self.mode == "scalar":
            return f.value(t, x, a.dt, a.dx)
        return np.array([[g.value(t, x, a.dt, a.dx) for g in row] for row in f],
                        dtype=complex)


def _concrete_shape(base: str, dims: tuple[int, int]) -> tuple[int, int]:
    from .atoms import MATRIX_SHAPES
    n, m = dims
    table = {"N": n, "M": m, "1": 1}
    r, c = MATRIX_SHAPES[base]
    return table[r], table[c]


@dataclass(frozen=True)
class ExponentialSolution:
    """u = a e^(kx+wt), uh = b e^-(kx+wt), w = 2ab - k^2.

    The dispersion relation makes the pair an exact solution of the order-2
    flow equations, with pi and pih realized as true x-derivatives.
    """
    alpha: complex
    beta: complex
    k: complex

    @property
    def omega(self) -> complex:
        return 2 * self.alpha * self.beta - self.k ** 2

    @staticmethod
    def random(seed: int) -> "ExponentialSolution":
        rng = random.Random(seed)
        def c():
            return rng.uniform(-1, 1) + 1j * rng.uniform(-1, 1)
        return ExponentialSolution(c(), c(), c())

    def atom_value(self, a: FieldAtom, t: float, x: float) -> complex:
        w, k = self.omega, self.k
        base, dt, dx = a.base, a.dt, a.dx
        if base == "pi":
            base, dx = "uh", dx + 1
        elif base == "pih":
            base, dx = "u", dx + 1
        if base == "u":
            return self.alpha * w ** dt * k ** dx * np.exp(k * x + w * t)
        if base == "uh":
            return self.beta * (-w) ** dt * (-k) ** dx * np.exp(-(k * x + w * t))
        raise UnhousedAtomError(f"no evaluator for atom {a}")


def _coeff_value(c, params: dict | None) -> complex:
    if isinstance(c, GaussianRational):
        return c.to_complex()
    if isinstance(c, RatFunc):
        if params is None:
            raise ValueError("boundary-constant coefficients need parameter values")
        return c.eval(params)
    raise TypeError(f"cannot evaluate coefficient {type(c).__name__}")


def evaluate(expr, sample, point, lam: complex | None = None, params: dict | None = None):
    """Exact analytic evaluation of kernel values on a field sample.

    NCPolynomial -> complex (scalar) or ndarray (matrix); PolyMatrix ->
    assembled ndarray; LaurentSeries -> value at the given lam.  Trace
    polynomials evaluate through numpy traces.
    """
    t, x = point
    if isinstance(expr, NCPolynomial):
        return _eval_poly(expr, sample, t, x, params)
    if isinstance(expr, TracePolynomial):
        out = 0j
        for w, c in expr.terms.items():
            val = _eval_word_matrix(w, sample, t, x)
            out += _coeff_value(c, params) * np.trace(np.atleast_2d(val))
        return out
    if isinstance(expr, PolyMatrix):
        return _eval_matrix(expr, sample, t, x, params)
    if isinstance(expr, LaurentSeries):
        if lam is None:
            raise ValueError("a spectral-parameter value is required for series")
        out = None
        for p, m in expr.coeffs.items():
            v = _eval_matrix(m, sample, t, x, params) * lam ** p
            out = v if out is None else out + v
        if out is None:
            rows = sum(sample.dim_of(d) for d in expr.row_dims) if hasattr(sample, "dim_of") \
                else len(expr.row_dims)
            cols = sum(sample.dim_of(d) for d in expr.col_dims) if hasattr(sample, "dim_of") \
                else len(expr.col_dims)
            return np.zeros((rows, cols), dtype=complex)
        return out
    raise TypeError(f"cannot evaluate {type(expr).__name__}")


def _eval_word_matrix(w, sample, t, x):
    val = None
    for a in w.atoms:
        v = sample.atom_value(a, t, x)
        v = np.atleast_2d(v) if not np.isscalar(v) else np.array([[v]])
        val = v if val is None else val @ v
    return val


def _eval_poly(p: NCPolynomial, sample, t, x, params=None):
    scalar = p.mode == "scalar" or all(d == "1" for d in p.shape)
    dim = (lambda d: 1) if not hasattr(sample, "dim_of") else sample.dim_of
    rows = 1 if p.shape[0] == "1" else dim(p.shape[0])
    cols = 1 if p.shape[1] == "1" else dim(p.shape[1])
    out = np.zeros((rows, cols), dtype=complex)
    for w, c in p.terms.items():
        cv = _coeff_value(c, params)
        if len(w) == 0:
            out += cv * np.eye(rows, cols, dtype=complex)
            continue
        val = None
        for a in w.atoms:
            v = sample.atom_value(a, t, x)
            v = np.array([[v]]) if np.isscalar(v) else np.atleast_2d(v)
            val = v if val is None else val @ v
        out += cv * val
    if scalar and out.shape == (1, 1):
        return out[0, 0]
    return out


def _eval_matrix(m: PolyMatrix, sample, t, x, params=None):
    dim = (lambda d: 1) if not hasattr(sample, "dim_of") else sample.dim_of
    blocks = []
    for i, rd in enumerate(m.row_dims):
        row = []
        for j, cd in enumerate(m.col_dims):
            v = _eval_poly(m.entries[i][j], sample, t, x, params)
            v = np.array([[v]]) if np.isscalar(v) else v
            want = (dim(rd) if rd != "1" else 1, dim(cd) if cd != "1" else 1)
            if v.shape != want:
                v = np.broadcast_to(v, want) if v.size == 1 else v
            row.append(v)
        blocks.append(row)
    return np.block(blocks)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    trials: int
    tol: float
    max_abs: float
    worst_seed: int
    passed: bool

    def as_dict(self):
        return {"name": self.name, "trials": self.trials, "tol": self.tol,
                "max_abs": self.max_abs, "worst_seed": self.worst_seed,
                "passed": self.passed}


def identity_check(lhs, rhs, trials: int, tol: float, seed: int = 0,
                   name: str = "identity", mode: str = "scalar",
                   lam: complex | None = None, params: dict | None = None) -> CheckReport:
    """Max |lhs - rhs| over random samples and points; never raises on failure."""
    rng = random.Random(seed)
    worst, worst_seed = 0.0, seed
    for _ in range(trials):
        s_seed = rng.randrange(2 ** 31)
        sample = FieldSample.random(s_seed, mode)
        point = (rng.uniform(-2, 2), rng.uniform(-2, 2))
        a = evaluate(lhs, sample, point, lam, params)
        b = evaluate(rhs, sample, point, lam, params)
        d = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
        if d > worst:
            worst, worst_seed = d, s_seed
    return CheckReport(name, trials, tol, worst, worst_seed, worst < tol)


def finite_difference_crosscheck(expr, sample, point, h: float, var: str = "t",
                                 order: int = 1) -> dict:
    """Central-difference check of the analytic derivative; O(h^2) accurate."""
    if not 1e-6 <= h <= 1e-3:
        raise ValueError("h must lie in [1e-6, 1e-3]")
    t, x = point
    d = expr
    for _ in range(order):
        d = d.differentiate_t() if var == "t" else d.differentiate_x()
    exact = evaluate(d, sample, point)

    def f(tt, xx):
        return evaluate(expr, sample, (tt, xx))

    if order == 1:
        if var == "t":
            fd = (f(t + h, x) - f(t - h, x)) / (2 * h)
        else:
            fd = (f(t, x + h) - f(t, x - h)) / (2 * h)
    elif order == 2:
        if var == "t":
            fd = (f(t + h, x) - 2 * f(t, x) + f(t - h, x)) / h ** 2
        else:
            fd = (f(t, x + h) - 2 * f(t, x) + f(t, x - h)) / h ** 2
    else:
        raise ValueError("order must be 1 or 2")
    err = float(np.max(np.abs(np.asarray(fd) - np.asarray(exact))))
    scale = max(1.0, float(np.max(np.abs(np.asarray(exact)))))
    return {"h": h, "var": var, "order": order, "abs_error": err,
            "rel_error": err / scale, "exact": exact, "fd": fd}
