"""Involution enumeration against the raw polynomial system."""

import random
from fractions import Fraction

import pytest

from revequiv.exactalg import AlgScalar, Mat4, anticommutes, is_involution
from revequiv.solver import (
    R0,
    DegenerateResonance,
    LinearPart,
    UnsupportedGroupOrder,
    partition_by_group,
    reflection_block_matrix,
    solve_involutions,
    verify_raw_system,
)

LIN = LinearPart(Fraction(1), Fraction(2))

HALF = Fraction(1, 2)
ROOT3_HALF = AlgScalar(0, HALF, 3)


def test_counts_per_order():
    assert len(solve_involutions(LIN, 2)) == 4
    assert len(solve_involutions(LIN, 3)) == 9
    assert len(solve_involutions(LIN, 4)) == 16
    assert len(solve_involutions(LIN, 6)) == 36


def test_every_solution_is_involutive_anticommuting():
    a = LIN.matrix()
    for n in (2, 3, 4, 6):
        for sol in solve_involutions(LIN, n):
            assert is_involution(sol.s)
            assert anticommutes(sol.s, a)


def test_degenerate_flagging():
    sols = solve_involutions(LIN, 2)
    degenerate = [s for s in sols if s.degenerate]
    assert len(degenerate) == 1
    assert degenerate[0].s == R0
    assert solve_involutions(LIN, 2, include_degenerate=False) == [
        s for s in sols if not s.degenerate
    ]


def test_known_order2_matrices():
    got = {s.s for s in solve_involutions(LIN, 2)}
    expected = {
        Mat4.diagonal([-1, 1, -1, 1]),
        Mat4.diagonal([-1, 1, 1, -1]),
        Mat4.diagonal([1, -1, -1, 1]),
        Mat4.diagonal([1, -1, 1, -1]),
    }
    assert got == expected


def test_known_order3_matrix_entries():
    s = reflection_block_matrix(3, 1, 1)
    assert s[0, 0] == AlgScalar(-HALF)
    assert s[0, 1] == ROOT3_HALF
    assert s[1, 1] == AlgScalar(HALF)
    assert s in {x.s for x in solve_involutions(LIN, 3)}


def test_partition_sizes():
    for n, expected in ((2, [1, 1, 1]), (3, [2, 2, 2, 2]), (4, [2] * 6)):
        nondeg = solve_involutions(LIN, n, include_degenerate=False)
        classes = partition_by_group(nondeg)
        assert sorted(len(c.members) for c in classes) == sorted(expected)
        for c in classes:
            assert c.group_order == 2 * n


def test_solutions_independent_of_frequencies():
    other = LinearPart(Fraction(2, 3), Fraction(7))
    for n in (2, 3, 4):
        assert [s.s for s in solve_involutions(LIN, n)] == [
            s.s for s in solve_involutions(other, n)
        ]


def test_degenerate_resonance_rejected():
    with pytest.raises(DegenerateResonance):
        solve_involutions(LinearPart(Fraction(2), Fraction(-2)), 2)


def test_unsupported_order_rejected():
    with pytest.raises(UnsupportedGroupOrder):
        solve_involutions(LIN, 5)


def test_raw_system_accepts_exactly_the_solutions():
    for n in (2, 3, 4):
        for sol in solve_involutions(LIN, n):
            assert verify_raw_system(sol.s, LIN, n).ok


def test_raw_system_rejects_perturbations():
    rng = random.Random("solver-perturb")
    sols = solve_involutions(LIN, 4)
    for _ in range(50):
        base = rng.choice(sols).s
        i, j = rng.randrange(4), rng.randrange(4)
        delta = Fraction(rng.randint(1, 5), rng.randint(1, 5))
        rows = [[base[r, c] for c in range(4)] for r in range(4)]
        rows[i][j] = rows[i][j] + delta
        assert not verify_raw_system(Mat4(rows), LIN, 4).ok


def test_raw_system_report_names_failures():
    rep = verify_raw_system(Mat4.identity(), LIN, 2)
    assert not rep.ok
    assert any(name.startswith("anticommute") for name in rep.failing)


def test_solution_json_shape():
    sol = solve_involutions(LIN, 4)[0]
    obj = sol.to_json(class_id="Xi1")
    assert set(obj) == {"matrix", "angles", "degenerate", "group_order", "class_id"}
