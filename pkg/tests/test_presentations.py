import itertools
import random
from fractions import Fraction

import pytest

from semihom import catalog
from semihom.graded import DegreeWindow
from semihom.presentations import (
    Character,
    EnvelopingTruncation,
    GradedLieAlgebra,
    PresentationError,
    Straightener,
    TriangularAlgebra,
    build_enveloping,
)


def test_lie_algebra_validation():
    with pytest.raises(PresentationError):
        # bracket does not add degrees
        GradedLieAlgebra(("a", "b"), {"a": 1, "b": 1}, {("a", "b"): {"a": 1}})
    with pytest.raises(PresentationError):
        # sl2 with a wrong structure constant fails Jacobi
        GradedLieAlgebra(
            ("f", "h", "e"),
            {"e": 1, "h": 0, "f": -1},
            {("e", "f"): {"h": 1}, ("h", "e"): {"e": 2}, ("h", "f"): {"f": -3}},
        )


def test_sl2_brackets_and_jacobi():
    lie = catalog.sl2()
    combo, known = lie.bracket(lie.index["e"], lie.index["f"])
    assert known and combo == {lie.index["h"]: Fraction(1)}
    combo, _ = lie.bracket(lie.index["f"], lie.index["e"])
    assert combo == {lie.index["h"]: Fraction(-1)}


def test_enveloping_abelian_line():
    env = build_enveloping(catalog.abelian_line(), DegreeWindow(0, 3), 3)
    assert env.space.dims() == {0: 1, 1: 1, 2: 1, 3: 1}
    assert env.space.basis(2) == (("x", "x"),)
    assert all(env.space.exact_at(d) for d in range(0, 4))


def test_enveloping_sl2_filtration_dimension():
    # words of length <= 2 in three letters: 1 + 3 + 6 = 10
    env = build_enveloping(catalog.sl2(), DegreeWindow(-2, 2), 2)
    assert env.space.total_dim() == 10


def test_heisenberg_defining_relation():
    env = build_enveloping(catalog.heisenberg(), DegreeWindow(0, 4), 3)
    xy, ok1 = env.multiply(("x",), ("y",))
    yx, ok2 = env.multiply(("y",), ("x",))
    assert ok1 and ok2
    diff = dict(xy)
    for w, c in yx.items():
        diff[w] = diff.get(w, Fraction(0)) - c
    diff = {w: c for w, c in diff.items() if c != 0}
    assert diff == {("c",): Fraction(1)}


def test_straightening_is_associative_within_cap():
    for make, window in [
        (catalog.sl2, DegreeWindow(-3, 3)),
        (catalog.heisenberg, DegreeWindow(0, 6)),
        (catalog.mixed_nilpotent, DegreeWindow(-4, 4)),
    ]:
        env = build_enveloping(make(), window, 4)
        letters = [(l,) for l in env.word_letters]
        for a, b, c in itertools.product(letters, repeat=3):
            ab_c, ok1 = env.multiply_many([a, b, c])
            if not ok1:
                continue
            ab, ok = env.multiply(a, b)
            assert ok
            acc = {}
            complete = True
            for w, coeff in ab.items():
                prod, okk = env.multiply(w, c)
                complete &= okk
                for ww, cc in prod.items():
                    acc[ww] = acc.get(ww, Fraction(0)) + coeff * cc
            if not complete:
                continue
            acc = {w: v for w, v in acc.items() if v != 0}
            assert acc == ab_c


def test_central_substitution():
    lie = catalog.loop_sl2(1)
    env = build_enveloping(lie, DegreeWindow(-1, 1), 2, central_values={"K": Fraction(1, 2)})
    # [e[1], f[-1]] = h[0] + (-1)*<e,f>*K -> h[0] - 1/2 (pinned orientation)
    ef, ok = env.multiply(("e[1]",), ("f[-1]",))
    fe, ok2 = env.multiply(("f[-1]",), ("e[1]",))
    comm = dict(ef)
    for w, c in fe.items():
        comm[w] = comm.get(w, Fraction(0)) - c
    comm = {w: c for w, c in comm.items() if c != 0}
    assert comm == {("h[0]",): Fraction(1), (): Fraction(-1, 2)}


def test_unknown_brackets_poison_completeness():
    lie = catalog.loop_sl2(1)
    env = build_enveloping(lie, DegreeWindow(-2, 2), 2, central_values={"K": 0})
    # straightening f[-1].e[-1] -> e[-1].f[-1] needs [f[-1],e[-1]] = -h[-2]+...,
    # which lies outside the depth-1 letter window
    prod, ok = env.multiply(("e[-1]",), ("f[-1]",))
    assert ok
    prod, ok = env.multiply(("f[-1]",), ("e[-1]",))
    assert not ok


def test_cap_exceeded_flagged_not_dropped_silently():
    env = build_enveloping(catalog.abelian_line(), DegreeWindow(0, 8), 3)
    prod, ok = env.multiply(("x", "x"), ("x", "x"))
    assert not ok and prod == {}


def test_sl2_axioms_pass():
    t = catalog.sl2_triangular(DegreeWindow(-3, 3), 3)
    report = t.check_axioms()
    assert report.all_pass(), report.lines()


def test_axiom_iii_violation_detected():
    # N containing a degree-0 element
    lie = GradedLieAlgebra(("b", "a"), {"a": 0, "b": -1}, {})
    t = TriangularAlgebra(lie, n_letters=("a",), b_letters=("b",),
                          window=DegreeWindow(-2, 0), cap=2)
    report = t.check_axioms()
    assert not report.all_pass()
    assert not report.results["(ii) N positively graded"][0]


def test_affine_sl2_axioms_pass_on_window():
    t = catalog.affine_sl2_triangular(depth=2, cap=2, level=Fraction(1, 2))
    report = t.check_axioms()
    assert report.all_pass(), report.lines()


def test_adjoint_blocks():
    abelian = catalog.abelian_pair()
    blocks = abelian.adjoint_blocks("x")
    assert blocks["pp"].is_zero() and blocks["pm"].is_zero()
    assert blocks["mp"].is_zero() and blocks["mm"].is_zero()

    lie = catalog.loop_sl2(1)
    # ad(e[1]) maps f[-1] |-> h[0] - K, degree 0 lands in V_-
    blocks = lie.adjoint_blocks("e[1]")
    minus = blocks["minus"]
    col = minus.index("f[-1]")
    row_h = minus.index("h[0]")
    row_k = minus.index("K")
    assert blocks["mm"][(row_h, col)] == 1
    assert blocks["mm"][(row_k, col)] == -1
    # ad(h[0]) preserves degree: off-diagonal blocks vanish
    blocks = lie.adjoint_blocks("h[0]")
    assert blocks["pm"].is_zero() and blocks["mp"].is_zero()


def test_character_kills_brackets():
    lie = catalog.sl2()
    chi = Character(lie, {"e": 1}, domain=("e",))
    assert chi("e") == 1
    assert chi.on_word(("e", "e")) == 1
    with pytest.raises(PresentationError):
        Character(lie, {"e": 1, "f": 1, "h": 1})  # [e,f]=h not killed


def test_triangular_nb_decompose_matches_manual_sl2():
    t = catalog.sl2_triangular(DegreeWindow(-2, 2), 3)
    # f e = e f - h  (N (x) B order puts e first)
    terms, ok = t.nb_decompose(("f", "e"))
    assert ok
    assert terms == {(("e",), ("f",)): Fraction(1), ((), ("h",)): Fraction(-1)}


def test_pbw_word_enumeration_matches_partition_count():
    rng = random.Random(1)
    env = build_enveloping(catalog.heisenberg(), DegreeWindow(0, 6), 6)
    # dim U(x,y,c)_d with deg x=y=1, c=2: number of (a,b,c) with a+b+2c=d
    for d in range(0, 7):
        expect = sum(1 for a in range(d + 1) for b in range(d + 1)
                     for c in range(d + 1) if a + b + 2 * c == d)
        assert env.space.dim(d) == expect
        assert env.space.exact_at(d)
