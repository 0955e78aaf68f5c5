"""Resonant normal forms for p:q-resonant, dihedrally reversible fields.

Two independent routes to the same answer:

* the complex route: enumerate resonant monomials z1^a zbar1^b z2^c zbar2^d
  and derive, for each antiholomorphic linear involution, the coefficient
  constraint it forces (purely imaginary, purely real, Re = +-Im, or zero);

* the real route (the oracle): assemble, over Q, the kernel of the adjoint
  homological operator intersected with the two linear reversibility
  conditions, degree by degree, with exact nullspace computations.

Complex units are tracked as powers of i, so the whole pipeline stays in
rational arithmetic; a complex coefficient is a (Re, Im) pair of reals and a
conjugation-linear map acts on it through an explicit sign/swap rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import linalg
from .exactalg import Mat4, scalar
from .solver import R0, linear_part_matrix
from .vecfield import Poly, PolyMap, PolyVF, check_symmetry, conjugate


# ---------------------------------------------------------------------------
# resonance data
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ResonanceSpec:
    """A p:q resonance with coprime positive integers p != q."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise ValueError("p, q must be positive integers")
        if gcd(self.p, self.q) != 1:
            raise ValueError("p and q must be coprime")
        if self.p == self.q:
            raise ValueError("p == q (the 1:1 case) is outside the supported theory")

    def linear_matrix(self) -> Mat4:
        return linear_part_matrix(Fraction(self.p), Fraction(self.q))


@dataclass(frozen=True)
class ResMonomial:
    """z1^a zbar1^b z2^c zbar2^d d/dz_component, component in {1, 2}."""

    component: int
    exps: Tuple[int, int, int, int]

    def __post_init__(self):
        if self.component not in (1, 2):
            raise ValueError("component must be 1 or 2")
        if any(e < 0 for e in self.exps):
            raise ValueError("exponents must be nonnegative")

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def satisfies_resonance(self, spec: ResonanceSpec) -> bool:
        a, b, c, d = self.exps
        target = spec.p if self.component == 1 else spec.q
        return spec.p * (a - b) + spec.q * (c - d) == target

    def is_delta_type(self) -> bool:
        """True for z_j * Delta1^m * Delta2^n (the always-surviving shape)."""
        a, b, c, d = self.exps
        if self.component == 1:
            return a - b == 1 and c == d
        return a == b and c - d == 1

    def sort_key(self):
        return (self.component, self.degree, self.exps)

    def __str__(self) -> str:
        a, b, c, d = self.exps
        facs = []
        for e, name in zip((a, b, c, d), ("z1", "~z1", "z2", "~z2")):
            if e == 1:
                facs.append(name)
            elif e > 1:
                facs.append(f"{name}^{e}")
        body = "*".join(facs) if facs else "1"
        return f"{body} d/dz{self.component}"


def resonant_monomials(spec: ResonanceSpec, degree: int) -> List[ResMonomial]:
    """All monomials of total degree <= degree on the resonance lattice.

    Exhaustive enumeration of exponent tuples; the structured description
    (z_j and zbar1^(q-1) z2^p bases times products of the four resonant
    invariants) is recovered from this list, not assumed by it.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    out = []
    for comp in (1, 2):
        for a in range(degree + 1):
            for b in range(degree + 1 - a):
                for c in range(degree + 1 - a - b):
                    for d in range(degree + 1 - a - b - c):
                        if a + b + c + d == 0:
                            continue
                        m = ResMonomial(comp, (a, b, c, d))
                        if m.satisfies_resonance(spec):
                            out.append(m)
    out.sort(key=ResMonomial.sort_key)
    return out


# ---------------------------------------------------------------------------
# antiholomorphic involutions and coefficient constraints
# ---------------------------------------------------------------------------

_UNIT_NAMES = {0: "1", 1: "i", 2: "-1", 3: "-i"}


@dataclass(frozen=True)
class RevInvolution:
    """(z1, z2) -> global_sign * (eps1 * conj(z1), eps2 * conj(z2)).

    Units are stored as exponents of i (0..3); global_sign is +-1.  Any such
    map is an involution of C^2.
    """

    tag: str
    eps1: int  # exponent of i, mod 4
    eps2: int
    global_sign: int

    def __post_init__(self):
        if self.global_sign not in (-1, 1):
            raise ValueError("global_sign must be +-1")
        object.__setattr__(self, "eps1", self.eps1 % 4)
        object.__setattr__(self, "eps2", self.eps2 % 4)

    def real_form(self) -> Mat4:
        """The same map on (x1, x2, y1, y2) with z1 = x1 + i x2, z2 = y1 + i y2."""
        blocks = []
        for k in (self.eps1, self.eps2):
            b = {
                0: ((1, 0), (0, -1)),
                1: ((0, 1), (1, 0)),
                2: ((-1, 0), (0, 1)),
                3: ((0, -1), (-1, 0)),
            }[k]
            blocks.append(b)
        g = self.global_sign
        (a11, a12), (a21, a22) = blocks[0]
        (b11, b12), (b21, b22) = blocks[1]
        return Mat4(
            [
                [g * a11, g * a12, 0, 0],
                [g * a21, g * a22, 0, 0],
                [0, 0, g * b11, g * b12],
                [0, 0, g * b21, g * b22],
            ]
        )

    def __str__(self) -> str:
        s = "-" if self.global_sign < 0 else ""
        return f"{self.tag}: (z1,z2) -> {s}({_UNIT_NAMES[self.eps1]}*~z1, {_UNIT_NAMES[self.eps2]}*~z2)"


# The canonical reversor in complex coordinates: conj corresponds entrywise
# to the real involution diag(1,-1,1,-1).
CONJ = RevInvolution("conj", 0, 0, +1)

# The seven reflections phi_0..phi_6.  phi_1..phi_6 convert, in real
# coordinates, to members of the six dihedral solution classes (one per
# class), which is validated in the tests.  phi_0 is -conj = -diag(1,-1,1,-1);
# note that -conj is NOT an element of the groups <diag(1,-1,1,-1), S_j> for
# j in {1,2,3,5}, and using it as the first reversor instead of conj swaps
# the classes 1<->5 and 2<->3.  The survival analysis therefore uses CONJ;
# phi_0 is kept for checking the published-style constraint tables, which
# were derived with it.
PHI = {
    0: RevInvolution("phi0", 0, 0, -1),
    1: RevInvolution("phi1", 1, 0, +1),
    2: RevInvolution("phi2", 0, 3, -1),
    3: RevInvolution("phi3", 0, 1, +1),
    4: RevInvolution("phi4", 3, 3, -1),
    5: RevInvolution("phi5", 3, 0, -1),
    6: RevInvolution("phi6", 1, 3, +1),
}

GROUP_INDICES = (1, 2, 3, 4, 5, 6)


def real_group_representative(group_index: int) -> Mat4:
    """The real 4x4 involution corresponding to phi_{group_index}."""
    if group_index not in GROUP_INDICES:
        raise ValueError("group index must be 1..6")
    return PHI[group_index].real_form()


class CoeffConstraint(Enum):
    """Constraint on a complex coefficient forced by reversibility."""

    FREE = "Free"
    RE_ZERO = "ReZero"  # conj(b) = -b
    IM_ZERO = "ImZero"  # conj(b) = b
    RE_EQ_IM = "ReEqIm"  # conj(b) = -i b
    RE_EQ_MINUS_IM = "ReEqMinusIm"  # conj(b) = i b
    ZERO = "Zero"

    def parameter_count(self) -> int:
        if self is CoeffConstraint.FREE:
            return 2
        if self is CoeffConstraint.ZERO:
            return 0
        return 1

    def meet(self, other: "CoeffConstraint") -> "CoeffConstraint":
        """Conjunction of two constraints on the same coefficient."""
        if self is other:
            return self
        if self is CoeffConstraint.FREE:
            return other
        if other is CoeffConstraint.FREE:
            return self
        # two distinct chi-relations conj(b) = chi_k b force b = 0
        return CoeffConstraint.ZERO


_CHI_TO_CONSTRAINT = {
    0: CoeffConstraint.IM_ZERO,  # chi = 1
    1: CoeffConstraint.RE_EQ_MINUS_IM,  # chi = i
    2: CoeffConstraint.RE_ZERO,  # chi = -1
    3: CoeffConstraint.RE_EQ_IM,  # chi = -i
}


def reversibility_unit(m: ResMonomial, phi: RevInvolution) -> int:
    """Exponent e with conj(coefficient) = i^e * coefficient forced by
    phi-reversibility of the monomial field."""
    a, b, c, d = m.exps
    n = m.degree
    s = 0 if phi.global_sign == 1 else 2
    kj = phi.eps1 if m.component == 1 else phi.eps2
    # chi = -(sigma^(N-1)) eps1^(a-b) eps2^(c-d) conj(eps_j)
    e = 2 + s * (n - 1) + phi.eps1 * (a - b) + phi.eps2 * (c - d) - kj
    return e % 4


def constraint_for(m: ResMonomial, phi: RevInvolution) -> CoeffConstraint:
    """The coefficient constraint that phi-reversibility forces on m."""
    return _CHI_TO_CONSTRAINT[reversibility_unit(m, phi)]


def conjoin_constraints(
    m: ResMonomial, reversors: Iterable[RevInvolution]
) -> CoeffConstraint:
    out = CoeffConstraint.FREE
    for phi in reversors:
        out = out.meet(constraint_for(m, phi))
    return out


# ---------------------------------------------------------------------------
# survival analysis
# ---------------------------------------------------------------------------


def relaxed_hypothesis(spec: ResonanceSpec) -> Dict[str, bool]:
    """The three mod-4 side conditions under which the pure
    Delta1/Delta2 normal form is claimed."""
    p, q = spec.p, spec.q
    cond_q = (
        q % 4 == 1
        or q % 4 == 3
        or (q % 4 == 0 and (p + q) % 2 == 1)
        or (q % 4 == 2 and (p + q) % 2 == 0)
    )
    cond_p_mid = p % 4 in (1, 2, 3)
    cond_p = (
        p % 4 == 1
        or p % 4 == 3
        or (p % 4 == 0 and q % 2 == 1)
        or (p % 4 == 2 and q % 2 == 0)
    )
    return {
        "q_condition": cond_q,
        "p_nondegenerate": cond_p_mid,
        "p_condition": cond_p,
        "holds": cond_q and cond_p_mid and cond_p,
    }


@dataclass(frozen=True)
class NormalFormResult:
    surviving: Tuple[Tuple[ResMonomial, CoeffConstraint], ...]
    degree: int
    spec: ResonanceSpec
    group_index: int
    hypothesis_status: dict

    def parameter_count(self, exact_degree: Optional[int] = None) -> int:
        return sum(
            c.parameter_count()
            for m, c in self.surviving
            if exact_degree is None or m.degree == exact_degree
        )

    def is_pure_delta_form(self) -> bool:
        return all(
            m.is_delta_type() and c is CoeffConstraint.RE_ZERO
            for m, c in self.surviving
        )

    def to_json(self) -> dict:
        return {
            "p": self.spec.p,
            "q": self.spec.q,
            "group": self.group_index,
            "degree": self.degree,
            "hypothesis_status": self.hypothesis_status,
            "surviving": [
                {
                    "component": m.component,
                    "exponents": list(m.exps),
                    "constraint": c.value,
                }
                for m, c in self.surviving
            ],
        }


def survival_analysis(
    spec: ResonanceSpec,
    group_index: int,
    degree: int,
    reversors: Optional[Sequence[RevInvolution]] = None,
) -> NormalFormResult:
    """Conjoin the coefficient constraints of the two generating reversors
    over every resonant monomial; monomials whose constraint collapses to
    Zero are dropped.

    The default reversor pair is (conj, phi_j): conj is the complex form of
    the canonical real involution fixed by the classification.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    if reversors is None:
        if group_index not in GROUP_INDICES:
            raise ValueError("group index must be 1..6")
        reversors = (CONJ, PHI[group_index])
    surviving = []
    for m in resonant_monomials(spec, degree):
        c = conjoin_constraints(m, reversors)
        if c is not CoeffConstraint.ZERO:
            surviving.append((m, c))
    status = dict(relaxed_hypothesis(spec))
    result = NormalFormResult(
        surviving=tuple(surviving),
        degree=degree,
        spec=spec,
        group_index=group_index,
        hypothesis_status=status,
    )
    status["pure_delta_form"] = result.is_pure_delta_form()
    return result


# ---------------------------------------------------------------------------
# the real normal-form template
# ---------------------------------------------------------------------------


class MixedResonantTerms(ValueError):
    """Survivors outside the z_j*Delta1^m*Delta2^n family: no pure template."""


@dataclass(frozen=True)
class RealNormalForm:
    """The 4-component template with free real parameters a_mn, b_mn:

        dx1 = -p x2 - x2 * sum a_mn D1^m D2^n
        dx2 =  p x1 + x1 * sum a_mn D1^m D2^n
        dy1 = -q y2 - y2 * sum b_mn D1^m D2^n
        dy2 =  q y1 + y1 * sum b_mn D1^m D2^n

    with D1 = x1^2 + x2^2, D2 = y1^2 + y2^2.
    """

    spec: ResonanceSpec
    degree: int
    a_indices: Tuple[Tuple[int, int], ...]
    b_indices: Tuple[Tuple[int, int], ...]

    def parameter_names(self) -> List[str]:
        return [f"a{m}{n}" for m, n in self.a_indices] + [
            f"b{m}{n}" for m, n in self.b_indices
        ]

    def as_text(self) -> str:
        def s(indices, letter):
            if not indices:
                return "0"
            return " + ".join(f"{letter}{m}{n}*D1^{m}*D2^{n}" for m, n in indices)

        sa, sb = s(self.a_indices, "a"), s(self.b_indices, "b")
        p, q = self.spec.p, self.spec.q
        return "\n".join(
            [
                f"dx1 = -{p}*x2 - x2*({sa})",
                f"dx2 = {p}*x1 + x1*({sa})",
                f"dy1 = -{q}*y2 - y2*({sb})",
                f"dy2 = {q}*y1 + y1*({sb})",
                "where D1 = x1^2 + x2^2, D2 = y1^2 + y2^2",
            ]
        )

    def as_latex(self) -> str:
        def s(indices, letter):
            if not indices:
                return "0"
            return " + ".join(
                f"{letter}_{{{m}{n}}}\\Delta_1^{{{m}}}\\Delta_2^{{{n}}}"
                for m, n in indices
            )

        sa, sb = s(self.a_indices, "a"), s(self.b_indices, "b")
        p, q = self.spec.p, self.spec.q
        return "\n".join(
            [
                "\\left\\{\\begin{array}{lcl}",
                f"\\dot{{x}}_1 &=& -{p}x_2 - x_2\\left({sa}\\right)\\\\",
                f"\\dot{{x}}_2 &=& {p}x_1 + x_1\\left({sa}\\right)\\\\",
                f"\\dot{{y}}_1 &=& -{q}y_2 - y_2\\left({sb}\\right)\\\\",
                f"\\dot{{y}}_2 &=& {q}y_1 + y_1\\left({sb}\\right)",
                "\\end{array}\\right.",
            ]
        )

    def to_json(self) -> dict:
        return {
            "p": self.spec.p,
            "q": self.spec.q,
            "degree": self.degree,
            "a_indices": [list(t) for t in self.a_indices],
            "b_indices": [list(t) for t in self.b_indices],
        }


def emit_real_normal_form(r: NormalFormResult) -> RealNormalForm:
    """Convert a pure-Delta survival result into the real template."""
    a_idx, b_idx = [], []
    for m, c in r.surviving:
        if not (m.is_delta_type() and c is CoeffConstraint.RE_ZERO):
            raise MixedResonantTerms(
                "mixed resonant terms present; no pure Delta1/Delta2 emission: "
                f"{m} with {c.value}"
            )
        a, b, cc, d = m.exps
        if m.degree == 1:
            continue  # the linear rotation itself
        if m.component == 1:
            a_idx.append((b, cc))  # z1 D1^b D2^c
        else:
            b_idx.append((a, d))
    return RealNormalForm(
        spec=r.spec,
        degree=r.degree,
        a_indices=tuple(sorted(a_idx, key=lambda t: (t[0] + t[1], t))),
        b_indices=tuple(sorted(b_idx, key=lambda t: (t[0] + t[1], t))),
    )


# ---------------------------------------------------------------------------
# the real-coordinates oracle
# ---------------------------------------------------------------------------


def _monomial_exponents(dx: int, dy: int) -> List[Tuple[int, int, int, int]]:
    return [
        (i, dx - i, j, dy - j) for i in range(dx + 1) for j in range(dy + 1)
    ]


def _homological(h: PolyVF, b: Mat4) -> PolyVF:
    """L_B(h) = Dh . (B x) - B . h."""
    deg = h.max_degree
    bx = [Poly.linear_form([b[i, j] for j in range(4)]) for i in range(4)]
    comps = []
    for i in range(4):
        acc = Poly()
        for j in range(4):
            acc = acc + h.components[i].diff(j).mul(bx[j], deg + 1)
        for j in range(4):
            acc = acc - h.components[j].scale(b[i, j])
        comps.append(acc)
    return PolyVF(comps, deg + 1)


def _reversibility_defect(h: PolyVF, phi: Mat4, sign: int) -> PolyVF:
    """phi . h(xi) - sign * h(phi xi); zero iff h has the symmetry."""
    deg = h.max_degree
    comps = []
    for i in range(4):
        acc = Poly()
        for j in range(4):
            acc = acc + h.components[j].scale(phi[i, j])
        acc = acc - h.components[i].substitute_linear(phi).scale(sign)
        comps.append(acc)
    return PolyVF(comps, deg)


@dataclass(frozen=True)
class _Block:
    """One invariant coordinate block: component pair x (x-degree, y-degree)."""

    pair: int  # 0 -> components (0, 1), 1 -> components (2, 3)
    dx: int
    dy: int

    def basis(self) -> List[Tuple[int, Tuple[int, int, int, int]]]:
        comps = (0, 1) if self.pair == 0 else (2, 3)
        return [(c, e) for c in comps for e in _monomial_exponents(self.dx, self.dy)]


def _blocks(degree: int) -> List[_Block]:
    return [
        _Block(pair, dx, degree - dx) for pair in (0, 1) for dx in range(degree + 1)
    ]


def _field_to_block_vector(v: PolyVF, block: _Block, basis_index) -> List[Fraction]:
    """Coordinates of a field in a block basis; raises if it leaks outside."""
    out = [Fraction(0)] * len(basis_index)
    for i in range(4):
        for e, c in v.components[i].terms.items():
            key = (i, e)
            if key not in basis_index:
                raise ValueError(f"operator leaks outside block: {key}")
            out[basis_index[key]] = c.as_rational()
    return out


def _basis_field(comp: int, e, degree: int) -> PolyVF:
    comps = [Poly() for _ in range(4)]
    comps[comp] = Poly.monomial(e, 1)
    return PolyVF(comps, degree)


def _block_operator_rows(
    block: _Block, degree: int, ops
) -> Tuple[List[List[Fraction]], List[Tuple[int, tuple]]]:
    """Stack the matrices of the given field operators on one block."""
    basis = block.basis()
    index = {key: k for k, key in enumerate(basis)}
    columns = []
    for comp, e in basis:
        h = _basis_field(comp, e, degree)
        col_parts = []
        for op in ops:
            img = op(h)
            col_parts.append(_field_to_block_vector(img, block, index))
        columns.append([x for part in col_parts for x in part])
    nrows = len(columns[0])
    rows = [[columns[c][r] for c in range(len(columns))] for r in range(nrows)]
    return rows, basis


@dataclass(frozen=True)
class OracleResult:
    """Exact kernel dimensions (and bases) of the constrained real system."""

    spec: ResonanceSpec
    group_index: int
    dimensions: Dict[int, int]
    bases: Dict[int, List[PolyVF]]

    def to_json(self) -> dict:
        return {
            "p": self.spec.p,
            "q": self.spec.q,
            "group": self.group_index,
            "dimensions": {str(k): v for k, v in sorted(self.dimensions.items())},
        }


def brute_force_kernel(
    spec: ResonanceSpec,
    group_index: int,
    degree: int,
    sign: int = -1,
    min_degree: int = 2,
) -> OracleResult:
    """Exact dimension and basis, per degree, of

        ker L_{A^T}  intersect  {reversible under diag(1,-1,1,-1)}
                     intersect  {reversible under S_group}

    assembled entirely in real coordinates over Q.  ``sign=+1`` switches to
    the pure-equivariance sanity mode.
    """
    a_t = spec.linear_matrix().transpose()
    s_real = real_group_representative(group_index)
    dims: Dict[int, int] = {}
    bases: Dict[int, List[PolyVF]] = {}
    ops = [
        lambda h: _homological(h, a_t),
        lambda h: _reversibility_defect(h, R0, sign),
        lambda h: _reversibility_defect(h, s_real, sign),
    ]
    for k in range(min_degree, degree + 1):
        dim = 0
        vecs: List[PolyVF] = []
        for block in _blocks(k):
            rows, basis = _block_operator_rows(block, k, ops)
            for v in linalg.nullspace(rows, ncols=len(basis)):
                comps = [Poly() for _ in range(4)]
                for (comp, e), coef in zip(basis, v):
                    if coef:
                        comps[comp] = comps[comp] + Poly.monomial(e, coef)
                vecs.append(PolyVF(comps, k))
                dim += 1
        dims[k] = dim
        bases[k] = vecs
    return OracleResult(
        spec=spec, group_index=group_index, dimensions=dims, bases=bases
    )


# ---------------------------------------------------------------------------
# Belitskii normalization
# ---------------------------------------------------------------------------


# rational involutions used for symmetry detection during normalization
def _symmetry_candidates() -> List[Mat4]:
    cands = [R0, Mat4.diagonal([-1, 1, -1, 1]), Mat4.diagonal([-1, 1, 1, -1]),
             Mat4.diagonal([1, -1, -1, 1])]
    cands += [real_group_representative(j) for j in GROUP_INDICES]
    return cands


class NormalizationError(RuntimeError):
    pass


def belitskii_normalize(
    x: PolyVF, spec: ResonanceSpec, degree: int
) -> Tuple[PolyVF, PolyMap]:
    """Degree-by-degree normalization onto ker L_{A^T}.

    At every degree the homogeneous part is split along
    H^k = im(L_A) + ker(L_{A^T}) over Q; the image part is removed by a
    near-identity change.  Detected linear reversing symmetries of the input
    are preserved: the change is restricted to the corresponding equivariant
    subspace, and the kernel part to the reversible slice.
    """
    a = spec.linear_matrix()
    if x.linear_part() != a:
        raise ValueError("field's linear part is not the requested resonant rotation")
    deg = max(x.max_degree, degree)
    current = PolyVF(x.components, deg)
    detected = tuple(
        s for s in _symmetry_candidates() if check_symmetry(current, s, -1).ok
    )
    change = PolyMap.identity(deg)
    for k in range(2, degree + 1):
        xk = current.homogeneous_part(k)
        if xk.is_zero():
            continue
        blocks_data = _normalization_spaces_from_mats(spec, k, detected)
        u_comps = [Poly() for _ in range(4)]
        for block, (basis, equi_basis, kern_basis, la_cols) in zip(
            _blocks(k), blocks_data
        ):
            index = {key: i for i, key in enumerate(basis)}
            target = _field_to_block_vector(
                _restrict_to_block(xk, block), block, index
            )
            if all(t == 0 for t in target):
                continue
            # columns: kernel part first so that already-normalized input
            # solves with a zero change (idempotence)
            cols = [list(v) for v in kern_basis] + [list(c) for c in la_cols]
            rows = [
                [cols[c][r] for c in range(len(cols))] for r in range(len(basis))
            ]
            sol = linalg.solve(rows, target)
            if sol is None:
                raise NormalizationError(
                    f"homological splitting failed at degree {k} (block {block})"
                )
            ucoef = sol[len(kern_basis):]
            for coefs, uc in zip(equi_basis, ucoef):
                if uc == 0:
                    continue
                for (comp, e), val in zip(basis, coefs):
                    if val:
                        u_comps[comp] = u_comps[comp] + Poly.monomial(e, uc * val)
        if all(c.is_zero() for c in u_comps):
            continue
        # h = Id - u adds -L_A(u) at degree k, cancelling the image part
        h = PolyMap(
            [Poly.variable(i) - u_comps[i] for i in range(4)], deg
        )
        current = conjugate(current, h)
        change = h.compose(change)
    return current, change


def _restrict_to_block(v: PolyVF, block: _Block) -> PolyVF:
    comps = []
    lo = 0 if block.pair == 0 else 2
    for i in range(4):
        if i not in (lo, lo + 1):
            comps.append(Poly())
            continue
        comps.append(
            Poly(
                {
                    e: c
                    for e, c in v.components[i].terms.items()
                    if e[0] + e[1] == block.dx
                }
            )
        )
    return PolyVF(comps, v.max_degree)


@lru_cache(maxsize=None)
def _normalization_spaces_cached(p: int, q: int, k: int, sym_key: tuple):
    spec = ResonanceSpec(p, q)
    syms = [
        Mat4([[Fraction(n, d) for (n, d) in row] for row in s]) for s in sym_key
    ]
    return _normalization_spaces_build(spec, k, syms)


def _normalization_spaces_from_mats(spec: ResonanceSpec, k: int, syms):
    sym_key = tuple(
        tuple(
            tuple(
                (s[i, j].as_rational().numerator, s[i, j].as_rational().denominator)
                for j in range(4)
            )
            for i in range(4)
        )
        for s in syms
    )
    return _normalization_spaces_cached(spec.p, spec.q, k, sym_key)


def _normalization_spaces_build(spec: ResonanceSpec, k: int, syms):
    a = spec.linear_matrix()
    a_t = a.transpose()
    blocks_data = []
    for block in _blocks(k):
        basis = block.basis()
        index = {key: i for i, key in enumerate(basis)}
        nb = len(basis)

        def mat_of(op):
            cols = []
            for comp, e in basis:
                h = _basis_field(comp, e, k)
                cols.append(_field_to_block_vector(op(h), block, index))
            return [[cols[c][r] for c in range(nb)] for r in range(nb)]

        la_rows = mat_of(lambda h: _homological(h, a))
        lat_rows = mat_of(lambda h: _homological(h, a_t))
        equi_rows = []
        rev_rows = []
        for s_mat in syms:
            equi_rows += mat_of(lambda h, s=s_mat: _reversibility_defect(h, s, +1))
            rev_rows += mat_of(lambda h, s=s_mat: _reversibility_defect(h, s, -1))
        equi_basis = (
            linalg.nullspace(equi_rows, ncols=nb)
            if equi_rows
            else [[Fraction(int(i == j)) for j in range(nb)] for i in range(nb)]
        )
        kern_basis = linalg.nullspace(lat_rows + rev_rows, ncols=nb)
        la_cols = []
        for v in equi_basis:
            la_cols.append(
                [sum(la_rows[r][c] * v[c] for c in range(nb)) for r in range(nb)]
            )
        blocks_data.append((basis, equi_basis, kern_basis, la_cols))
    return blocks_data


# ---------------------------------------------------------------------------
# class labeling
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _xi_group_elements(j: int) -> frozenset:
    from .groups import generate_closure

    return generate_closure([R0, real_group_representative(j)]).element_set()


def xi_index(s: Mat4) -> Optional[int]:
    """Which of the six order-8 dihedral classes the involution s belongs to.

    Classes are keyed by the group <diag(1,-1,1,-1), S>; returns None when S
    generates none of the six (e.g. for degenerate solutions or other n).
    """
    from .groups import ClosureCapExceeded, generate_closure

    try:
        elems = generate_closure([R0, s], cap=16).element_set()
    except ClosureCapExceeded:
        return None
    for j in GROUP_INDICES:
        if elems == _xi_group_elements(j):
            return j
    return None


# ---------------------------------------------------------------------------
# published constraint tables for b * ~z1^(q-1) * z2^p d/dz1
# ---------------------------------------------------------------------------


def table_monomial(spec: ResonanceSpec) -> ResMonomial:
    """The off-diagonal resonant generator ~z1^(q-1) * z2^p d/dz1."""
    return ResMonomial(1, (0, spec.q - 1, spec.p, 0))


@dataclass(frozen=True)
class ConstraintTableRow:
    """One row: under phi_{phi_index}-reversibility and the stated residue
    hypothesis on (p, q), the coefficient of ~z1^(q-1) z2^p d/dz1 satisfies
    the stated constraint."""

    phi_index: int
    hypothesis: str
    stated: Optional[CoeffConstraint]  # None: the row's condition is vacuous
    tautology: bool = False
    # the hypothesis as printed, when it differs from the one used: six of
    # the phi_2 rows are keyed "q = k mod 4" in print, which contradicts
    # their own parity tags and the row constraints match the derivation
    # conj(b) = (-1)^(q-1) i^p b only with "p = k mod 4"
    printed_hypothesis: Optional[str] = None

    def hypothesis_holds(self, p: int, q: int) -> bool:
        return _ROW_PREDICATES[(self.phi_index, self.hypothesis)](p, q)

    def minimal_pair(self, bound: int = 60) -> Optional[ResonanceSpec]:
        """Smallest coprime (p, q) with p != q satisfying the hypothesis,
        ordered by p+q then p; None if unsatisfiable within the bound."""
        for s in range(3, bound + 1):
            for p in range(1, s):
                q = s - p
                if p == q or gcd(p, q) != 1:
                    continue
                if self.hypothesis_holds(p, q):
                    return ResonanceSpec(p, q)
        return None

    def computed(self, spec: ResonanceSpec) -> CoeffConstraint:
        return constraint_for(table_monomial(spec), PHI[self.phi_index])


def _mk_rows():
    C = CoeffConstraint
    rows = []
    preds = {}

    def row(j, text, pred, stated, tautology=False, printed=None):
        rows.append(ConstraintTableRow(j, text, stated, tautology, printed))
        preds[(j, text)] = pred

    row(0, "p+q even", lambda p, q: (p + q) % 2 == 0, C.RE_ZERO)
    row(0, "p+q odd", lambda p, q: (p + q) % 2 == 1, C.IM_ZERO)

    row(1, "q = 0 mod 4", lambda p, q: q % 4 == 0, C.RE_ZERO)
    row(1, "q = 1 mod 4", lambda p, q: q % 4 == 1, C.RE_EQ_MINUS_IM)
    row(1, "q = 2 mod 4", lambda p, q: q % 4 == 2, C.IM_ZERO)
    row(1, "q = 3 mod 4", lambda p, q: q % 4 == 3, C.RE_EQ_IM)

    row(2, "p = 0 mod 4, q even", lambda p, q: p % 4 == 0 and q % 2 == 0, C.RE_ZERO)
    row(2, "p = 0 mod 4, q odd", lambda p, q: p % 4 == 0 and q % 2 == 1, C.IM_ZERO)
    row(2, "p = 1 mod 4, q even", lambda p, q: p % 4 == 1 and q % 2 == 0, C.RE_EQ_IM,
        printed="q = 1 mod 4, q even")
    row(2, "p = 1 mod 4, q odd", lambda p, q: p % 4 == 1 and q % 2 == 1, C.RE_EQ_MINUS_IM,
        printed="q = 1 mod 4, q odd")
    row(2, "p = 2 mod 4, q even", lambda p, q: p % 4 == 2 and q % 2 == 0, C.IM_ZERO,
        printed="q = 2 mod 4, q even")
    row(2, "p = 2 mod 4, q odd", lambda p, q: p % 4 == 2 and q % 2 == 1, C.RE_ZERO,
        printed="q = 2 mod 4, q odd")
    row(2, "p = 3 mod 4, q even", lambda p, q: p % 4 == 3 and q % 2 == 0, C.RE_EQ_MINUS_IM,
        printed="q = 3 mod 4, q even")
    row(2, "p = 3 mod 4, q odd", lambda p, q: p % 4 == 3 and q % 2 == 1, C.RE_EQ_IM,
        printed="q = 3 mod 4, q odd")

    row(3, "p = 0 mod 4", lambda p, q: p % 4 == 0, C.RE_ZERO)
    row(3, "p = 1 mod 4", lambda p, q: p % 4 == 1, C.RE_EQ_IM)
    row(3, "p = 2 mod 4", lambda p, q: p % 4 == 2, C.IM_ZERO)
    row(3, "p = 3 mod 4", lambda p, q: p % 4 == 3, C.RE_EQ_MINUS_IM)

    row(4, "p+q = 0 mod 4, q even", lambda p, q: (p + q) % 4 == 0 and q % 2 == 0, C.RE_ZERO)
    row(4, "p+q = 0 mod 4, q odd", lambda p, q: (p + q) % 4 == 0 and q % 2 == 1, C.IM_ZERO)
    row(4, "p+q = 1 mod 4, q even", lambda p, q: (p + q) % 4 == 1 and q % 2 == 0, C.RE_EQ_IM)
    row(4, "p+q = 1 mod 4, q odd", lambda p, q: (p + q) % 4 == 1 and q % 2 == 1, C.RE_EQ_MINUS_IM)
    row(4, "p+q = 2 mod 4, q even", lambda p, q: (p + q) % 4 == 2 and q % 2 == 0, C.IM_ZERO)
    row(4, "p+q = 2 mod 4, q odd", lambda p, q: (p + q) % 4 == 2 and q % 2 == 1, C.RE_ZERO)
    row(4, "p+q = 3 mod 4, q even", lambda p, q: (p + q) % 4 == 3 and q % 2 == 0, C.RE_EQ_MINUS_IM)
    # printed condition: Im(b) = Im(b) -- vacuously true, so the row as
    # published constrains nothing; the true constraint is computed instead
    row(4, "p+q = 3 mod 4, q odd", lambda p, q: (p + q) % 4 == 3 and q % 2 == 1, None, tautology=True)

    row(5, "q = 0 mod 4, p+q even", lambda p, q: q % 4 == 0 and (p + q) % 2 == 0, C.RE_ZERO)
    row(5, "q = 0 mod 4, p+q odd", lambda p, q: q % 4 == 0 and (p + q) % 2 == 1, C.IM_ZERO)
    row(5, "q = 1 mod 4, p+q even", lambda p, q: q % 4 == 1 and (p + q) % 2 == 0, C.RE_EQ_IM)
    row(5, "q = 1 mod 4, p+q odd", lambda p, q: q % 4 == 1 and (p + q) % 2 == 1, C.RE_EQ_MINUS_IM)
    row(5, "q = 2 mod 4, p+q even", lambda p, q: q % 4 == 2 and (p + q) % 2 == 0, C.IM_ZERO)
    row(5, "q = 2 mod 4, p+q odd", lambda p, q: q % 4 == 2 and (p + q) % 2 == 1, C.RE_ZERO)
    row(5, "q = 3 mod 4, p+q even", lambda p, q: q % 4 == 3 and (p + q) % 2 == 0, C.RE_EQ_MINUS_IM)
    row(5, "q = 3 mod 4, p+q odd", lambda p, q: q % 4 == 3 and (p + q) % 2 == 1, C.RE_EQ_IM)

    row(6, "p+q = 0 mod 4", lambda p, q: (p + q) % 4 == 0, C.RE_ZERO)
    row(6, "p+q = 1 mod 4", lambda p, q: (p + q) % 4 == 1, C.RE_EQ_MINUS_IM)
    row(6, "p+q = 2 mod 4", lambda p, q: (p + q) % 4 == 2, C.IM_ZERO)
    row(6, "p+q = 3 mod 4", lambda p, q: (p + q) % 4 == 3, C.RE_EQ_IM)

    return tuple(rows), preds


CONSTRAINT_TABLE, _ROW_PREDICATES = _mk_rows()


def table_report(bound: int = 60) -> List[dict]:
    """Evaluate every published row: satisfiability, witness (p, q), the
    computed constraint there, and agreement with the stated one."""
    out = []
    for r in CONSTRAINT_TABLE:
        spec = r.minimal_pair(bound)
        entry = {
            "phi": r.phi_index,
            "hypothesis": r.hypothesis,
            "stated": r.stated.value if r.stated is not None else None,
            "tautology": r.tautology,
            "satisfiable": spec is not None,
        }
        if r.printed_hypothesis is not None:
            entry["printed_hypothesis"] = r.printed_hypothesis
        if spec is not None:
            c = r.computed(spec)
            entry["witness"] = [spec.p, spec.q]
            entry["computed"] = c.value
            entry["agrees"] = (r.stated is None) or (c is r.stated)
        out.append(entry)
    return out
