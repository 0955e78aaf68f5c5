"""Classification of the second reversing involution.

Enumerates all linear involutions S with S*A = -A*S and (R0*S)^n = Id for the
block-rotation linear part A(alpha, beta), partitions them by the group they
generate together with R0, and re-verifies each candidate against the raw
polynomial system by direct substitution.

The enumeration rests on a block reduction: when |alpha| != |beta|,
anticommutation with A forces S block-diagonal with 2x2 blocks, each a
symmetric traceless matrix; S^2 = Id then makes every block a unit reflection
[[cos t, sin t], [sin t, -cos t]], and (R0*S)^n = Id quantizes the two
reflection angles to t = 2*pi*k/n.  The raw-system check is the independent
oracle for this reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .exactalg import AlgScalar, Mat4, anticommutes, is_involution
from .groups import MatGroup, generate_closure

SUPPORTED_N = (2, 3, 4, 6)


class DegenerateResonance(ValueError):
    """|alpha| = |beta|: the block reduction is invalid and the case is
    outside the supported theory."""


class UnsupportedGroupOrder(ValueError):
    pass


def linear_part_matrix(alpha: Fraction, beta: Fraction) -> Mat4:
    """A(alpha, beta): two independent 2x2 rotations-generators."""
    a, b = Fraction(alpha), Fraction(beta)
    return Mat4(
        [
            [0, -a, 0, 0],
            [a, 0, 0, 0],
            [0, 0, 0, -b],
            [0, 0, b, 0],
        ]
    )


R0 = Mat4.diagonal([1, -1, 1, -1])


@dataclass(frozen=True)
class LinearPart:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a = Fraction(self.alpha)
        b = Fraction(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if a == 0 or b == 0:
            raise ValueError("alpha and beta must be nonzero")

    def matrix(self) -> Mat4:
        return linear_part_matrix(self.alpha, self.beta)

    def check_nonresonant_pair(self):
        if abs(self.alpha) == abs(self.beta):
            raise DegenerateResonance(
                "degenerate resonance, block reduction invalid: |alpha| == |beta|"
            )


# Exact (cos, sin) of 2*pi*k/n for the supported n, as AlgScalar pairs.
_HALF = Fraction(1, 2)


def _cs(n: int, k: int) -> Tuple[AlgScalar, AlgScalar]:
    k %= n
    table = {
        (2, 0): (1, 0),
        (2, 1): (-1, 0),
        (3, 0): (1, 0),
        (3, 1): (AlgScalar(-_HALF), AlgScalar(0, _HALF, 3)),
        (3, 2): (AlgScalar(-_HALF), AlgScalar(0, -_HALF, 3)),
        (4, 0): (1, 0),
        (4, 1): (0, 1),
        (4, 2): (-1, 0),
        (4, 3): (0, -1),
        (6, 0): (1, 0),
        (6, 1): (AlgScalar(_HALF), AlgScalar(0, _HALF, 3)),
        (6, 2): (AlgScalar(-_HALF), AlgScalar(0, _HALF, 3)),
        (6, 3): (-1, 0),
        (6, 4): (AlgScalar(-_HALF), AlgScalar(0, -_HALF, 3)),
        (6, 5): (AlgScalar(_HALF), AlgScalar(0, -_HALF, 3)),
    }
    c, s = table[(n, k)]
    return AlgScalar(c) if not isinstance(c, AlgScalar) else c, (
        AlgScalar(s) if not isinstance(s, AlgScalar) else s
    )


def reflection_block_matrix(n: int, k1: int, k2: int) -> Mat4:
    """diag-block of the two unit reflections at angles 2*pi*k1/n, 2*pi*k2/n."""
    c1, s1 = _cs(n, k1)
    c2, s2 = _cs(n, k2)
    z = AlgScalar(0)
    return Mat4(
        [
            [c1, s1, z, z],
            [s1, -c1, z, z],
            [z, z, c2, s2],
            [z, z, s2, -c2],
        ]
    )


@dataclass(frozen=True)
class InvolutionSolution:
    s: Mat4
    block_angles: Tuple[Fraction, Fraction]  # (k1/n, k2/n)
    degenerate: bool
    group_order: int

    def sort_key(self):
        return self.s.sort_key()

    def to_json(self, class_id=None) -> dict:
        out = {
            "matrix": self.s.to_json(),
            "angles": [
                {"num": a.numerator, "den": a.denominator} for a in self.block_angles
            ],
            "degenerate": self.degenerate,
            "group_order": self.group_order,
        }
        if class_id is not None:
            out["class_id"] = class_id
        return out


@dataclass(frozen=True)
class XiClass:
    members: Tuple[InvolutionSolution, ...]
    group_order: int

    def sort_key(self):
        return min(m.sort_key() for m in self.members)


def solve_involutions(
    lin: LinearPart, n: int, include_degenerate: bool = True
) -> List[InvolutionSolution]:
    """All S with S*A = -A*S, S^2 = Id, (R0*S)^n = Id, canonically sorted.

    Solutions whose group <R0, S> has order below 2n (in particular S = R0)
    are flagged degenerate; they are included unless ``include_degenerate``
    is false.
    """
    if n not in SUPPORTED_N:
        raise UnsupportedGroupOrder(
            f"n must be one of {SUPPORTED_N} (quadratic-field angle values); got {n}"
        )
    lin.check_nonresonant_pair()
    a_mat = lin.matrix()
    ident = Mat4.identity()
    out = []
    for k1 in range(n):
        for k2 in range(n):
            s = reflection_block_matrix(n, k1, k2)
            # sanity: the construction already guarantees these
            assert is_involution(s) and anticommutes(s, a_mat)
            rs = R0 * s
            p = rs
            order = 1
            while p != ident:
                p = p * rs
                order += 1
            assert n % order == 0
            group_order = 2 * order if order > 1 else 2
            sol = InvolutionSolution(
                s=s,
                block_angles=(Fraction(k1, n), Fraction(k2, n)),
                degenerate=group_order < 2 * n,
                group_order=group_order,
            )
            if sol.degenerate and not include_degenerate:
                continue
            out.append(sol)
    out.sort(key=InvolutionSolution.sort_key)
    return out


def partition_by_group(solutions: Sequence[InvolutionSolution]) -> List[XiClass]:
    """Group solutions by the matrix group <R0, S> they generate.

    Two solutions share a class iff their closures coincide as element sets.
    Classes come out in canonical order.
    """
    buckets = {}
    for sol in solutions:
        closure = generate_closure([R0, sol.s])
        key = closure.element_set()
        buckets.setdefault(key, []).append(sol)
    classes = [
        XiClass(
            members=tuple(sorted(sols, key=InvolutionSolution.sort_key)),
            group_order=len(key),
        )
        for key, sols in buckets.items()
    ]
    classes.sort(key=XiClass.sort_key)
    return classes


@dataclass(frozen=True)
class RawSystemReport:
    """Per-equation residuals of the raw polynomial system at a candidate S."""

    residuals: Tuple[Tuple[str, AlgScalar], ...]

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for _, r in self.residuals)

    @property
    def failing(self) -> List[str]:
        return [name for name, r in self.residuals if not r.is_zero()]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "failing": self.failing,
            "n_equations": len(self.residuals),
        }


def verify_raw_system(s: Mat4, lin: LinearPart, n: int) -> RawSystemReport:
    """Substitute the 16 entries of s into every equation of the raw system.

    The system is generated programmatically from the matrix relations
    S*A + A*S = 0, S^2 - Id = 0 and the group relation (written as
    S*R0 - (R0*S)^(n-1) = 0 for n >= 3, and R0*S - S*R0 = 0 for n = 2);
    evaluating each entry of these matrix expressions at s is exactly the
    substitution of s into the corresponding scalar polynomial equation.
    """
    a_mat = lin.matrix()
    residuals = []

    def record(tag: str, m: Mat4):
        for i in range(4):
            for j in range(4):
                residuals.append((f"{tag}[{i + 1},{j + 1}]", m[i, j]))

    record("anticommute", s * a_mat + a_mat * s)
    record("involution", s * s - Mat4.identity())
    if n == 2:
        record("group", R0 * s - s * R0)
    else:
        p = R0 * s
        power = p
        for _ in range(n - 2):
            power = power * p
        record("group", s * R0 - power)
    return RawSystemReport(residuals=tuple(residuals))
