"""Exact relation suite for the twist action on H_1 at a given genus.

Families: commutation of disjoint twists, braid relations of once-meeting
twists, t_{f(x)} = f t_x f^-1 for random f, the order and equivariance of the
rotation, and the lantern relation on each four-holed sphere a_k .. a_{k+2}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import GeometricRelation, a, c, geometric_relation, homology_class, standard_curves
from .derivation import lantern_curves, lantern_phi_words
from .homology import (
    SpMatrix,
    evaluate,
    evaluate_by_row_ops,
    random_word,
    rotation_matrix,
    transvection,
    twist,
)


@dataclass(frozen=True)
class RelationResult:
    family: str
    instance: str
    genus: int
    passed: bool

    def to_json(self) -> dict:
        return {"family": self.family, "instance": self.instance, "genus": self.genus, "passed": self.passed}


def commutation_and_braid(genus: int) -> list[RelationResult]:
    curves = standard_curves(genus)
    T = {x: twist(x, genus) for x in curves}
    out = []
    for i, u in enumerate(curves):
        for v in curves[i + 1:]:
            rel = geometric_relation(u, v, genus)
            if rel is GeometricRelation.DISJOINT:
                ok = T[u] @ T[v] == T[v] @ T[u]
                out.append(RelationResult("commutation", f"{u} {v} = {v} {u}", genus, ok))
            else:
                ok = T[u] @ T[v] @ T[u] == T[v] @ T[u] @ T[v]
                out.append(RelationResult("braid", f"{u} {v} {u} = {v} {u} {v}", genus, ok))
    return out


def conjugation(genus: int, rng: np.random.Generator, samples: int = 100,
                max_length: int = 10) -> list[RelationResult]:
    """t_{f(x)} = f t_x f^-1 with f from the row-operation evaluator."""
    curves = standard_curves(genus)
    out = []
    for _ in range(samples):
        f = random_word(genus, rng, int(rng.integers(1, max_length + 1)))
        x = curves[rng.integers(len(curves))]
        F = evaluate_by_row_ops(f, genus)
        lhs = transvection(F @ homology_class(x, genus))
        rhs = F @ twist(x, genus) @ F.inverse()
        out.append(RelationResult("conjugation", f"t_(f {x}) = f {x} f^-1, f = {f}", genus, lhs == rhs))
    return out


def rotation(genus: int) -> list[RelationResult]:
    r = rotation_matrix(genus)
    ident = SpMatrix.identity(genus)
    powers = [r ** k for k in range(1, genus + 1)]
    out = [
        RelationResult("rotation-order", f"r^{genus} = 1", genus, powers[-1] == ident),
        RelationResult("rotation-order", f"r^k != 1 for 0 < k < {genus}", genus,
                       all(P != ident for P in powers[:-1])),
    ]
    for x in standard_curves(genus):
        y = x.rotate(genus, 1)
        ok = r @ twist(x, genus) @ r.inverse() == twist(y, genus)
        out.append(RelationResult("rotation-equivariance", f"r {x} r^-1 = {y}", genus, ok))
    return out


def lantern(genus: int) -> list[RelationResult]:
    out = []
    for k in range(1, genus - 1):
        phi1, phi2 = lantern_phi_words(k)
        d = lantern_curves(k, genus, evaluate(phi1, genus), evaluate(phi2, genus))
        lhs = evaluate(f"a{k} c{k} c{k + 1} a{k + 2}", genus)
        rhs = twist(a(k + 1), genus) @ transvection(d.d1) @ transvection(d.d2)
        out.append(RelationResult("lantern", f"a{k} c{k} c{k + 1} a{k + 2} = a{k + 1} d1 d2", genus, lhs == rhs))
    return out


def relation_suite(genus: int, rng: np.random.Generator | None = None,
                   conjugation_samples: int = 100) -> list[RelationResult]:
    if genus < 2:
        raise ValueError("the relation suite needs genus >= 2 (rotation and c-curves)")
    if rng is None:
        rng = np.random.default_rng(0)
    return (commutation_and_braid(genus) + conjugation(genus, rng, conjugation_samples)
            + rotation(genus) + lantern(genus))
