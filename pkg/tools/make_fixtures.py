"""Regenerate the JSON documents in fixtures/ from the example catalog.

Run from the repository root: ``python3 tools/make_fixtures.py``.
"""
from __future__ import annotations

import pathlib

import numpy as np

from defcat import examples as ex
from defcat import funmod as fm
from defcat import serialize as se
from defcat.linalg import Field
from defcat.lincat import matrix_category, matrix_morphism, trivial_deformation
from defcat.ring import FpModule, dual_numbers, residue_field_ring, residue_map, rmat_inverse, rmat_mul

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"
F5 = Field(5)


def single(name: str, obj):
    (OUT / name).write_text(se.dumps(se.document(obj)), encoding="utf-8")


def workspace(name: str, objects: dict):
    (OUT / name).write_text(se.dumps({"schema_version": se.SCHEMA_VERSION, "objects": objects}), encoding="utf-8")


def main():
    OUT.mkdir(exist_ok=True)
    R = dual_numbers(F5)
    k = residue_field_ring(F5)
    single("ring.json", R)
    single("dualnumbers.json", ex.truncated_algebra(F5, 2))
    single("a2.json", ex.a2_category(F5))
    single("deformation.json", ex.t2_eps_deformation(F5))
    single("nonstrict.json", ex.nonstrict_fixture(F5))
    single("quantum_torus.json", ex.quantum_torus(3))
    single("sierpinski.json", ex.sierpinski(F5).presheaf)
    single("point_dualnumbers.json", ex.point_space(ex.truncated_algebra(F5, 2)).presheaf)

    # two R-modules: the residue field k and R/(ε) ⊕ R
    ring = se.encode_ring(R)
    residue = se.encode_fpmodule(FpModule.residue_field(R))
    mixed = se.encode_fpmodule(FpModule(R, F5.array([[[0, 1]], [[0, 0]]])))
    workspace("modules.json", {"R": ring, "k": {**residue, "ring": "R"}, "M": {**mixed, "ring": "R"}})

    # base change of the projective at the first object of A2 over the dual numbers
    a2r = trivial_deformation(ex.a2_category(F5), residue_map(R)).total
    surj = se.encode_surjection(residue_map(R))
    cat = se.encode_category(a2r)
    proj = se.encode_functor_module(fm.representable(a2r, 0))
    workspace("basechange.json", {
        "R": ring, "k": se.encode_ring(k), "theta": {**surj, "source": "R", "target": "k"},
        "A": {**cat, "ring": "R"}, "P": {**proj, "category": "A"},
    })

    # the t(t) = 1 cocycle and the zero cochain on k[t]/t²
    b = ex.truncated_algebra(F5, 2)
    workspace("cochains.json", {
        "B": se.encode_category(b),
        "c": {**se.encode_cochain(ex.t2_cocycle(b)), "category": "B"},
        "zero": {**se.encode_cochain(ex.t2_cocycle(b).scale(0)), "category": "B"},
    })

    # lifting data on the trivial deformation of the matrix category {R, R²} over the dual numbers
    d = trivial_deformation(matrix_category(k, [1, 2]), residue_map(R))
    T = d.total
    eps = lambda m: F5.array(m)  # noqa: E731  entries are [unit, ε] coordinates
    u = eps([[[1, 1], [2, 0]], [[1, 0], [1, 3]]])
    ui = rmat_inverse(R, u)
    noisy = ui.copy()
    noisy[..., 1] = 0
    col0 = u[:, :1]
    row0 = ui[:1]
    mor = lambda x, y, m: {**se.encode_morphism(matrix_morphism(T, x, y, m)), "category": "T"}  # noqa: E731
    workspace("lift.json", {
        "T": se.encode_category(T),
        "d": {**se.encode_deformation(d), "total": "T"},
        "f": mor(1, 1, u), "g0": mor(1, 1, noisy),
        "e": mor(1, 1, rmat_mul(R, col0, row0)), "r0": mor(1, 0, row0 * np.array([1, 0])),
        "s0": mor(0, 1, col0 * np.array([1, 0])),
        "s1": mor(0, 1, u[:, :1]), "s2": mor(0, 1, u[:, 1:]),
        "p1": mor(1, 0, noisy[:1]), "p2": mor(1, 0, noisy[1:]),
    })


if __name__ == "__main__":
    main()
