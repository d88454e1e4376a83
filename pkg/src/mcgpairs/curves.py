"""The standard curve system a_i, b_i, c_i on the closed genus-g surface.

The surface sits with g handles arranged around a rotation axis; ``r`` shifts
handle i to handle i+1.  a_i is the meridian and b_i the longitude of handle
i, and c_i joins handles i and i+1 (indices mod g).

Homology basis order is (m_1..m_g, l_1..l_g) with m_i = [a_i], l_i = [b_i]
and <m_i, l_i> = +1.  We fix [c_i] = m_i + m_{i+1}.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass

import numpy as np

_CURVE_RE = re.compile(r"^([abc])(\d+)$")


class UnsupportedCurve(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CurveId:
    family: str  # "a", "b", "c"; "d" for the derived lantern curves d1, d2
    index: int
    k: int | None = None  # base index of a derived curve

    def __post_init__(self):
        if self.family not in ("a", "b", "c", "d"):
            raise ValueError(f"unknown curve family {self.family!r}")
        if self.family == "d" and (self.index not in (1, 2) or self.k is None):
            raise ValueError("derived curves are d1 or d2 with a base index k")

    @classmethod
    def parse(cls, text: str) -> "CurveId":
        match = _CURVE_RE.match(text.strip())
        if match is None:
            raise ValueError(f"not a standard curve name: {text!r}")
        return cls(match.group(1), int(match.group(2)))

    def __str__(self):
        if self.family == "d":
            return f"d{self.index}[k={self.k}]"
        return f"{self.family}{self.index}"

    def check(self, genus: int) -> None:
        if genus < 1:
            raise ValueError("genus must be positive")
        if self.family == "d":
            raise UnsupportedCurve(f"{self} is derived; its class comes from the derivation")
        if not 1 <= self.index <= genus:
            raise ValueError(f"{self} out of range for genus {genus}")

    def rotate(self, genus: int, steps: int = 1) -> "CurveId":
        """Image under r^steps."""
        self.check(genus)
        return CurveId(self.family, (self.index - 1 + steps) % genus + 1)


def a(i: int) -> CurveId:
    return CurveId("a", i)


def b(i: int) -> CurveId:
    return CurveId("b", i)


def c(i: int) -> CurveId:
    return CurveId("c", i)


def standard_curves(genus: int, lickorish: bool = False) -> list[CurveId]:
    """All a_i, b_i, c_i; with ``lickorish`` only c_1..c_{g-1}."""
    n_c = genus - 1 if lickorish else genus
    return (
        [a(i) for i in range(1, genus + 1)]
        + [b(i) for i in range(1, genus + 1)]
        + [c(i) for i in range(1, n_c + 1)]
    )


def homology_class(curve: CurveId | str, genus: int) -> np.ndarray:
    """Integer vector of length 2g for the oriented curve."""
    if isinstance(curve, str):
        curve = CurveId.parse(curve)
    curve.check(genus)
    v = np.zeros(2 * genus, dtype=object)
    i = curve.index - 1
    if curve.family == "a":
        v[i] = 1
    elif curve.family == "b":
        v[genus + i] = 1
    else:
        v[i] += 1
        v[(i + 1) % genus] += 1
    return v


def algebraic_intersection(u, v) -> int:
    """Symplectic pairing with <m_i, l_i> = 1."""
    if len(u) != len(v) or len(u) % 2:
        raise ValueError("homology classes must have equal even length")
    g = len(u) // 2
    return int(sum(u[i] * v[g + i] - u[g + i] * v[i] for i in range(g)))


class GeometricRelation(enum.Enum):
    DISJOINT = "disjoint"
    ONE_POINT = "one_point"


def geometric_relation(u: CurveId | str, v: CurveId | str, genus: int) -> GeometricRelation:
    if isinstance(u, str):
        u = CurveId.parse(u)
    if isinstance(v, str):
        v = CurveId.parse(v)
    u.check(genus)
    v.check(genus)
    if u.family > v.family:
        u, v = v, u
    pair = u.family + v.family
    one_point = False
    if pair == "ab":
        one_point = u.index == v.index
    elif pair == "bc":
        one_point = (v.index - u.index) % genus in (0, genus - 1)
    return GeometricRelation.ONE_POINT if one_point else GeometricRelation.DISJOINT
