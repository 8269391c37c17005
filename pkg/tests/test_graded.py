import random

from semihom.graded import (
    DegreeWindow,
    GradedMap,
    GradedVectorSpace,
    graded_dual,
    hom_dim,
    hom_space,
    tensor,
)
from semihom.exact_linalg import SparseMatrix


def space(dims, window=None, **kw):
    return GradedVectorSpace.from_dims(dims, window, **kw)


def test_dual_reflects_degrees():
    assert graded_dual(space({0: 1})).dims() == {0: 1}
    assert graded_dual(space({1: 2, 2: 3})).dims() == {-1: 2, -2: 3}
    v = space({1: 2, 2: 3})
    assert graded_dual(graded_dual(v)).dims() == v.dims()


def test_dual_marks_labels_and_swaps_completeness():
    v = GradedVectorSpace(DegreeWindow(0, 1), {1: ("x",)},
                          complete_below=True, complete_above=False)
    d = graded_dual(v)
    assert d.basis(-1) == ("x*",)
    assert d.complete_above and not d.complete_below


def test_tensor_dims_convolution():
    w = DegreeWindow(-3, 3)
    a = space({0: 1}, w, complete_below=True, complete_above=True)
    assert tensor(a, a, w).dims() == {0: 1}
    b = space({1: 1, 2: 1}, DegreeWindow(1, 2), complete_below=True, complete_above=True)
    c = space({-1: 1}, DegreeWindow(-1, -1), complete_below=True, complete_above=True)
    assert tensor(b, c, w).dims() == {0: 1, 1: 1}
    # N = polynomial-line dims tensor B dims {0:1,-1:1} on window [-1,2].
    # With N truncated at degree 2 the degree-2 component misses the
    # N_3 (x) B_{-1} contribution: dim 1, flagged inexact.
    n = space({0: 1, 1: 1, 2: 1}, DegreeWindow(0, 2), complete_below=True)
    bb = space({0: 1, -1: 1}, DegreeWindow(-1, 0), complete_above=True, complete_below=True)
    t = tensor(n, bb, DegreeWindow(-1, 2))
    assert t.dims() == {-1: 1, 0: 2, 1: 2, 2: 1}
    assert not t.exact_at(2)
    assert all(t.exact_at(d) for d in (-1, 0, 1))
    # widening N enough makes every reported degree exact: full convolution
    n4 = space({0: 1, 1: 1, 2: 1, 3: 1}, DegreeWindow(0, 3), complete_below=True)
    t4 = tensor(n4, bb, DegreeWindow(-1, 2))
    assert t4.dims() == {-1: 1, 0: 2, 1: 2, 2: 2}
    assert all(t4.exact_at(d) for d in (-1, 0, 1, 2))


def test_tensor_dims_match_bruteforce_convolution():
    rng = random.Random(5)
    for _ in range(30):
        wa = DegreeWindow(-2, 2)
        da = {d: rng.randrange(0, 3) for d in wa.degrees()}
        db = {d: rng.randrange(0, 3) for d in wa.degrees()}
        a = space({d: n for d, n in da.items() if n}, wa,
                  complete_below=True, complete_above=True)
        b = space({d: n for d, n in db.items() if n}, wa,
                  complete_below=True, complete_above=True)
        out = tensor(a, b, DegreeWindow(-4, 4))
        for n in range(-4, 5):
            expect = sum(da.get(i, 0) * db.get(n - i, 0) for i in range(-2, 3))
            assert out.dim(n) == expect
            assert out.exact_at(n)


def test_tensor_exactness_flags_clipping():
    # b is a truncation of something unbounded below
    a = space({0: 1, 1: 1}, DegreeWindow(0, 1), complete_below=True, complete_above=True)
    b = space({0: 1, -1: 1}, DegreeWindow(-1, 0), complete_above=True)  # not complete below
    t = tensor(a, b, DegreeWindow(-1, 1))
    # degree 1 = a_1*b_0 only if b has nothing below -1 contributing; a_2 etc absent.
    # contributions at degree -1: a_0*b_{-1} fine, but b_{-2} (unknown) * a_1 could hit
    assert not t.exact_at(-1)
    assert t.exact_at(1)  # would need b at degrees >= 0 known complete side or a below 0
    # degree 0: a_0 b_0 + a_1 b_{-1}: unknown b_{-... } paired with a at degree >= 1? a_2 is 0 (complete above)
    assert t.exact_at(0)


def test_hom_space_dims():
    assert hom_dim(space({0: 1}), space({0: 1}), 0) == 1
    v = space({0: 1, 1: 1}, complete_below=True, complete_above=True)
    w = space({0: 1}, complete_below=True, complete_above=True)
    assert hom_dim(v, w, -1) == 1
    assert hom_dim(space({0: 2}), space({0: 3}), 0) == 6


def test_hom_equals_tensor_dual_dimensionwise():
    rng = random.Random(9)
    for _ in range(20):
        wa = DegreeWindow(-2, 2)
        a = space({d: rng.randrange(0, 3) for d in wa.degrees()}, wa,
                  complete_below=True, complete_above=True)
        b = space({d: rng.randrange(0, 3) for d in wa.degrees()}, wa,
                  complete_below=True, complete_above=True)
        h = hom_space(a, b, window=DegreeWindow(-4, 4))
        t = tensor(graded_dual(a), b, DegreeWindow(-4, 4))
        assert h.dims() == t.dims()


def test_graded_map_blocks_validate_and_compose():
    v = space({0: 2, 1: 1}, DegreeWindow(0, 1))
    w = space({1: 2, 2: 2}, DegreeWindow(1, 2))
    f = GradedMap(v, w, 1, {0: SparseMatrix.from_rows([[1, 0], [0, 1]]),
                            1: SparseMatrix.from_rows([[2], [0]])})
    g = GradedMap.identity(w)
    gf = g.compose(f)
    assert gf.block(0)[(0, 0)] == 1
    assert gf.degree_shift == 1
    z = f.add(f.scale(-1))
    assert z.is_zero()
