#!/usr/bin/env python3
"""Write the checked-in golden JSON tables from the frozen reference data.

The goldens are built from laxforge.tables (typed-in expansions), never from
engine output, so `laxforge --golden goldens/ ...` is a real comparison.
"""
from __future__ import annotations

import sys
from pathlib import Path

from laxforge import serialize
from laxforge import tables as T
from laxforge.matrices import PolyMatrix
from laxforge.ncpoly import NCPolynomial


def anti_diag(mode, e12, e21):
    dims = ("1", "1") if mode == "scalar" else ("N", "M")
    z = lambda r, c: NCPolynomial.zero(mode, (r, c))
    return PolyMatrix(mode, dims, dims,
                      [[z(dims[0], dims[0]), e12], [e21, z(dims[1], dims[1])]])


def diag(mode, e11, e22):
    dims = ("1", "1") if mode == "scalar" else ("N", "M")
    z = lambda r, c: NCPolynomial.zero(mode, (r, c))
    return PolyMatrix(mode, dims, dims,
                      [[e11, z(dims[0], dims[1])], [z(dims[1], dims[0]), e22]])


def main(out_dir: str) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    order = 4
    w = [anti_diag("scalar", *T.w_scalar(k)) for k in range(1, order + 1)]
    z = [diag("scalar", *T.z_scalar(k)) for k in range(1, order)]
    payload = {"command": "riccati", "order": order, "mode": "scalar",
               "w": [serialize.to_dict(m) for m in w],
               "z": [serialize.to_dict(m) for m in z]}
    (out / f"riccati-scalar-{order}.json").write_text(serialize.dumps(payload))

    g = [T.gamma_matrix(k) for k in range(1, 5)]
    payload = {"command": "riccati", "which": "gamma", "order": 4,
               "coeffs": [serialize.to_dict(p) for p in g]}
    (out / "riccati-gamma-4.json").write_text(serialize.dumps(payload))

    for n in range(1, 5):
        payload = {"command": "hierarchy-u", "route": "gen", "n": n,
                   "mode": "scalar",
                   "series": serialize.to_dict(T.u_gen_scalar(n))}
        (out / f"hierarchy-u-gen-{n}-scalar.json").write_text(serialize.dumps(payload))
        payload = {"command": "hierarchy-u", "route": "dress", "n": n,
                   "mode": "matrix",
                   "series": serialize.to_dict(T.u_dress_matrix(n))}
        (out / f"hierarchy-u-dress-{n}-matrix.json").write_text(serialize.dumps(payload))

    payload = {"command": "hierarchy-charges", "kind": "H", "max_k": 3,
               "densities": [serialize.to_dict(T.h_scalar(k)) for k in range(1, 4)]}
    (out / "charges-H-3.json").write_text(serialize.dumps(payload))
    payload = {"command": "hierarchy-charges", "kind": "I", "max_k": 3,
               "densities": [serialize.to_dict(T.i_matrix(k)) for k in range(1, 4)]}
    (out / "charges-I-3.json").write_text(serialize.dumps(payload))
    print(f"wrote goldens to {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else
         str(Path(__file__).resolve().parent.parent / "goldens"))
