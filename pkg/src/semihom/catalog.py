"""Ready-made algebra presentations used by tests, demos and the CLI.

Degree conventions: finite sl2 carries the principal grading (e:1, h:0,
f:-1); loop algebras are graded by the power of z.  Invariant forms are
normalized so that (e,f) = 1 and (h,h) = 2 (the trace form of the
defining representation), which is the normalization under which the
critical-cocycle ratio is 2 h-dual = 4 and the sharp-dual level shift is
k -> -4 - k.
"""

from fractions import Fraction

from .graded import DegreeWindow
from .presentations import GradedLieAlgebra, TriangularAlgebra


def sl2():
    """sl2 with principal degrees e:1, h:0, f:-1 and basis order f,h,e."""
    return GradedLieAlgebra(
        labels=("f", "h", "e"),
        degrees={"e": 1, "h": 0, "f": -1},
        brackets={
            ("e", "f"): {"h": 1},
            ("h", "e"): {"e": 2},
            ("h", "f"): {"f": -2},
        },
    )


def sl2_triangular(window=DegreeWindow(-2, 2), cap=3):
    return TriangularAlgebra(sl2(), n_letters=("e",), b_letters=("f", "h"),
                             window=window, cap=cap)


def abelian_line(deg=1, label="x"):
    return GradedLieAlgebra((label,), {label: deg}, {})


def abelian_pair():
    """x of degree 1, y of degree -1, abelian; the simplest triangular data."""
    return GradedLieAlgebra(("y", "x"), {"x": 1, "y": -1}, {})


def abelian_pair_triangular(window=DegreeWindow(-3, 3), cap=4):
    return TriangularAlgebra(abelian_pair(), n_letters=("x",), b_letters=("y",),
                             window=window, cap=cap)


def heisenberg():
    """Positively graded Heisenberg: x:1, y:1, c:2 with [x,y]=c."""
    return GradedLieAlgebra(("x", "y", "c"), {"x": 1, "y": 1, "c": 2},
                            {("x", "y"): {"c": 1}})


def filiform3():
    """3-dim nilpotent (Heisenberg) algebra graded x:-1, y:-2, c:-3; used
    as a b-type algebra for Chevalley-Eilenberg oracle tests."""
    return GradedLieAlgebra(("x", "y", "c"), {"x": -1, "y": -2, "c": -3},
                            {("x", "y"): {"c": 1}})


def mixed_nilpotent():
    """x:1, u:-1, v:-2 with [x,v] = u: noncommutative triangular data with
    finite-dimensional graded components on both sides."""
    return GradedLieAlgebra(("u", "v", "x"), {"x": 1, "u": -1, "v": -2},
                            {("x", "v"): {"u": 1}})


def mixed_nilpotent_triangular(window=DegreeWindow(-3, 3), cap=4):
    return TriangularAlgebra(mixed_nilpotent(), n_letters=("x",), b_letters=("u", "v"),
                             window=window, cap=cap)


def nonabelian_n_pair():
    """Non-abelian positive part x:1, y:2, z:3 ([x,y]=z) against an
    abelian negative line m:-1."""
    return GradedLieAlgebra(("m", "x", "y", "z"),
                            {"x": 1, "y": 2, "z": 3, "m": -1},
                            {("x", "y"): {"z": 1}})


def nonabelian_n_triangular(window=DegreeWindow(-3, 3), cap=4):
    return TriangularAlgebra(nonabelian_n_pair(), n_letters=("x", "y", "z"),
                             b_letters=("m",), window=window, cap=cap)


SL2_FORM = {("e", "f"): Fraction(1), ("h", "h"): Fraction(2)}


def _sym_form(form):
    out = dict(form)
    for (a, b), v in form.items():
        out[(b, a)] = v
    return out


def loop_algebra(base, form, depth, central="K", complete=False):
    """z-degree truncation of the affinization base((z)) + C*central.

    Brackets: [x z^m, y z^n] = [x,y] z^(m+n) + n delta_{m+n,0} <x,y> central.
    Labels are "x[m]"; degree of x[m] is m.  The truncation is marked
    incomplete on both sides unless ``complete`` is forced.

    The cocycle orientation (n, not m) is pinned by measurement: with it,
    the commutators of left semiregular actions realize the level shift
    k -> -2 h-dual - k on the nose (see the level-shift check).
    """
    form = _sym_form(form)
    labels = []
    degrees = {}
    for m in range(-depth, depth + 1):
        for x in base.labels:
            lab = f"{x}[{m}]"
            labels.append(lab)
            degrees[lab] = m
    labels.append(central)
    degrees[central] = 0
    brackets = {}
    for m in range(-depth, depth + 1):
        for n in range(-depth, depth + 1):
            if not (-depth <= m + n <= depth):
                continue
            for x in base.labels:
                for y in base.labels:
                    combo, known = base.bracket(base.index[x], base.index[y])
                    assert known
                    out = {f"{base.labels[z]}[{m+n}]": c for z, c in combo.items()}
                    if m + n == 0 and m != 0:
                        v = form.get((x, y))
                        if v:
                            out[central] = out.get(central, Fraction(0)) + n * v
                    out = {k: v for k, v in out.items() if v != 0}
                    if out and (x, m) != (y, n):
                        brackets[(f"{x}[{m}]", f"{y}[{n}]")] = out
    return GradedLieAlgebra(labels, degrees, brackets, central=(central,),
                            complete_below=complete, complete_above=complete)


def loop_sl2(depth=3):
    return loop_algebra(sl2_ungraded(), SL2_FORM, depth)


def sl2_ungraded():
    """sl2 with all generators in degree 0, for use as a loop-algebra base."""
    return GradedLieAlgebra(
        labels=("e", "h", "f"),
        degrees={"e": 0, "h": 0, "f": 0},
        brackets={
            ("e", "f"): {"h": 1},
            ("h", "e"): {"e": 2},
            ("h", "f"): {"f": -2},
        },
    )


def loop_nilpotent_sl2(depth=3):
    """The loop algebra of the nilpotent line Ce: abelian, one letter per
    z-degree; the critical cocycle vanishes on it."""
    labels = tuple(f"e[{m}]" for m in range(-depth, depth + 1))
    degrees = {l: m for l, m in zip(labels, range(-depth, depth + 1))}
    return GradedLieAlgebra(labels, degrees, {},
                            complete_below=False, complete_above=False)


def heisenberg_loop(depth=2):
    """Loop of the 2-step nilpotent algebra [a,b]=c; nonabelian with zero
    critical cocycle, exercising the quadratic BRST term."""
    base = GradedLieAlgebra(("a", "b", "c"), {"a": 0, "b": 0, "c": 0},
                            {("a", "b"): {"c": 1}})
    labels = []
    degrees = {}
    brackets = {}
    for m in range(-depth, depth + 1):
        for x in ("a", "b", "c"):
            lab = f"{x}[{m}]"
            labels.append(lab)
            degrees[lab] = m
    for m in range(-depth, depth + 1):
        for n in range(-depth, depth + 1):
            if not (-depth <= m + n <= depth):
                continue
            brackets[(f"a[{m}]", f"b[{n}]")] = {f"c[{m+n}]": 1}
    return GradedLieAlgebra(labels, degrees, brackets,
                            complete_below=False, complete_above=False)


def affine_sl2_triangular(depth, cap, level, window=None):
    """U(sl2-hat)_k truncation with N = U(z g[z]-part), B = U(g[z^-1]-part),
    K substituted by the level."""
    lie = loop_sl2(depth)
    n_letters = tuple(l for l in lie.labels if lie.degrees[l] > 0)
    b_letters = tuple(l for l in lie.labels
                      if lie.degrees[l] <= 0 and l != "K")
    if window is None:
        window = DegreeWindow(-depth, depth)
    return TriangularAlgebra(lie, n_letters, b_letters, window, cap,
                             central_values={"K": level})
