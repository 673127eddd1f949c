"""Field atoms and ordered words.

An atom is one differentiated field symbol: the model fields u, uh ("u-hat"),
pi, pih ("pi-hat"), or an opaque dressing-kernel diagonal block K11/K22.
Block shapes use the symbolic dimensions 'N', 'M' and the scalar dimension
'1'; scalar mode forces every shape to (1, 1).

Words are ordered products of atoms.  In matrix mode the factor order is
meaningful and adjacent shapes must chain; in scalar mode words are stored in
a fixed canonical total order (sort key: base, dt, dx, flow).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

Dim = str  # 'N' | 'M' | '1'

FIELD_BASES = ("u", "uh", "pi", "pih")
KERNEL_BASES = ("K11", "K22")
BASES = FIELD_BASES + KERNEL_BASES
_BASE_INDEX = {b: k for k, b in enumerate(BASES)}

# matrix-mode shapes: u, pih are M x N; uh, pi are N x M; K11/K22 diagonal
MATRIX_SHAPES: dict[str, tuple[Dim, Dim]] = {
    "u": ("M", "N"),
    "pih": ("M", "N"),
    "uh": ("N", "M"),
    "pi": ("N", "M"),
    "K11": ("N", "N"),
    "K22": ("M", "M"),
}


class ShapeError(ValueError):
    """Raised when block shapes fail to chain or match."""


@dataclass(frozen=True)
class FieldAtom:
    """One differentiated field symbol with t/x derivative orders.

    ``dx`` counts derivatives in the flow variable ``x_flow``; atoms with
    different flow indices are distinct symbols.  ``dx > 0`` atoms exist only
    transiently before equation-of-motion substitution.
    """

    base: str
    dt: int = 0
    dx: int = 0
    flow: int = 2
    shape: tuple[Dim, Dim] = ("1", "1")

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown atom base {self.base!r}")
        if self.dt < 0 or self.dx < 0:
            raise ValueError("derivative orders must be non-negative")

    @property
    def rows(self) -> Dim:
        return self.shape[0]

    @property
    def cols(self) -> Dim:
        return self.shape[1]

    @property
    def sort_key(self):
        return (_BASE_INDEX[self.base], self.dt, self.dx, self.flow)

    def with_derivative(self, var: str, flow: int | None = None) -> "FieldAtom":
        if var == "t":
            return FieldAtom(self.base, self.dt + 1, self.dx, self.flow, self.shape)
        if var == "x":
            f = self.flow if self.dx > 0 else (flow if flow is not None else self.flow)
            if self.dx > 0 and flow is not None and flow != self.flow:
                raise ValueError(
                    f"atom already carries x_{self.flow} derivatives; cannot mix with x_{flow}")
            return FieldAtom(self.base, self.dt, self.dx + 1, f, self.shape)
        raise ValueError(f"unknown derivative variable {var!r}")

    def __str__(self):
        s = self.base
        if self.dt or self.dx:
            s += "_" + "t" * self.dt
            if self.dx:
                s += ("x" if self.flow == 2 else f"x{self.flow}") * self.dx
        return s


def atom(base: str, dt: int = 0, dx: int = 0, mode: str = "matrix",
         flow: int = 2) -> FieldAtom:
    """Build an atom with the shape implied by its base and mode."""
    shape = ("1", "1") if mode == "scalar" else MATRIX_SHAPES[base]
    return FieldAtom(base, dt, dx, flow, shape)


@dataclass(frozen=True)
class Word:
    """Ordered product of atoms; the empty word is the multiplicative unit."""

    atoms: tuple[FieldAtom, ...] = ()

    @property
    def sort_key(self):
        return (len(self.atoms), tuple(a.sort_key for a in self.atoms))

    def __len__(self):
        return len(self.atoms)

    def __iter__(self):
        return iter(self.atoms)

    def __str__(self):
        return "*".join(str(a) for a in self.atoms) if self.atoms else "1"


EMPTY_WORD = Word()


def chain_shape(atoms: Iterable[FieldAtom]) -> tuple[Dim, Dim] | None:
    """Shape of an atom chain, or None for the empty chain; raises on mismatch."""
    atoms = tuple(atoms)
    if not atoms:
        return None
    for a, b in zip(atoms, atoms[1:]):
        if a.cols != b.rows:
            raise ShapeError(f"shape mismatch in word: {a} is {a.shape}, {b} is {b.shape}")
    return (atoms[0].rows, atoms[-1].cols)


def make_word(atoms: Iterable[FieldAtom], mode: str) -> Word:
    atoms = tuple(atoms)
    if mode == "scalar":
        for a in atoms:
            if a.shape != ("1", "1"):
                raise ShapeError(f"scalar-mode word contains non-scalar atom {a}")
        return Word(tuple(sorted(atoms, key=lambda a: a.sort_key)))
    chain_shape(atoms)
    return Word(atoms)


def cyclic_canonical(word: Word) -> Word:
    """Minimal rotation of a trace word; all rotations of a closed chain are valid."""
    ats = word.atoms
    if len(ats) <= 1:
        return word
    rotations = [ats[k:] + ats[:k] for k in range(len(ats))]
    best = min(rotations, key=lambda r: tuple(a.sort_key for a in r))
    return Word(best)
