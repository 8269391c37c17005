"""Z-graded vector spaces on finite truncation windows.

Every space carries, besides per-degree bases, the bookkeeping needed to
make truncation honest: per-degree exactness flags, and completeness
flags saying whether the underlying (possibly infinite) object is known
to vanish below/above the window.  All operations propagate these flags,
so any reported dimension can be trusted exactly when its flag says so.
"""

from dataclasses import dataclass

from .exact_linalg import SparseMatrix


@dataclass(frozen=True)
class DegreeWindow:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo},{self.hi}]")

    def __contains__(self, d):
        return self.lo <= d <= self.hi

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def intersect(self, other):
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo > hi:
            return None
        return DegreeWindow(lo, hi)

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


def dual_label(label):
    if isinstance(label, str):
        return label + "*"
    return ("*", label)


class GradedVectorSpace:
    """Finite bases per degree inside a window, with exactness flags."""

    __slots__ = ("window", "labels", "exact", "complete_below", "complete_above",
                 "_index")

    def __init__(self, window, labels, exact=None, complete_below=False,
                 complete_above=False):
        self.window = window
        self.labels = {}
        for d, labs in sorted(labels.items()):
            if d not in window:
                raise ValueError(f"degree {d} outside window {window}")
            labs = tuple(labs)
            if len(set(labs)) != len(labs):
                raise ValueError(f"duplicate labels at degree {d}")
            if labs:
                self.labels[d] = labs
        self.exact = {d: True for d in window.degrees()}
        if exact:
            for d, flag in exact.items():
                if d in self.exact:
                    self.exact[d] = bool(flag)
        self.complete_below = complete_below
        self.complete_above = complete_above
        self._index = None

    @classmethod
    def from_dims(cls, dims, window=None, prefix="v", **kw):
        if window is None:
            ds = sorted(dims) or [0]
            window = DegreeWindow(min(ds), max(ds))
        labels = {d: tuple(f"{prefix}{d}_{i}" for i in range(n))
                  for d, n in dims.items() if n}
        return cls(window, labels, **kw)

    @classmethod
    def zero(cls, window=None, **kw):
        return cls(window or DegreeWindow(0, 0), {}, **kw)

    def dim(self, d):
        return len(self.labels.get(d, ()))

    def dims(self):
        return {d: len(l) for d, l in self.labels.items()}

    def degrees(self):
        return sorted(self.labels)

    def total_dim(self):
        return sum(len(l) for l in self.labels.values())

    def basis(self, d):
        return self.labels.get(d, ())

    def index(self, d, label):
        if self._index is None:
            self._index = {(dd, lab): i for dd, labs in self.labels.items()
                           for i, lab in enumerate(labs)}
        return self._index[(d, label)]

    # -- truncation bookkeeping -----------------------------------------

    def is_unknown(self, d):
        """True when nothing is known about degree d (outside the window
        on an incomplete side)."""
        if d < self.window.lo:
            return not self.complete_below
        if d > self.window.hi:
            return not self.complete_above
        return False

    def exact_at(self, d):
        if d in self.window:
            return self.exact[d]
        return not self.is_unknown(d)

    def maybe_nonzero(self, d):
        if self.is_unknown(d):
            return True
        if d not in self.window:
            return False
        return self.dim(d) > 0 or not self.exact[d]

    def maybe_nonzero_on_ray(self, lo=None, hi=None):
        """Could any degree in [lo, hi] (None = unbounded) be nonzero?"""
        if lo is None and not self.complete_below:
            return True
        if hi is None and not self.complete_above:
            return True
        if lo is not None and lo < self.window.lo and not self.complete_below:
            return True
        if hi is not None and hi > self.window.hi and not self.complete_above:
            return True
        scan_lo = self.window.lo if lo is None else max(lo, self.window.lo)
        scan_hi = self.window.hi if hi is None else min(hi, self.window.hi)
        return any(self.maybe_nonzero(d) for d in range(scan_lo, scan_hi + 1))

    def min_support(self):
        ds = self.degrees()
        return ds[0] if ds else None

    def max_support(self):
        ds = self.degrees()
        return ds[-1] if ds else None

    def __repr__(self):
        return f"GradedVectorSpace({self.dims()}, window={self.window})"


def graded_dual(v):
    """Degree-reflected dual; labels get a dual marker."""
    window = DegreeWindow(-v.window.hi, -v.window.lo)
    labels = {-d: tuple(dual_label(l) for l in labs) for d, labs in v.labels.items()}
    exact = {-d: v.exact[d] for d in v.window.degrees()}
    return GradedVectorSpace(window, labels, exact,
                             complete_below=v.complete_above,
                             complete_above=v.complete_below)


def _pair_exact(v, w, n):
    """Is the degree-n component of v (x) w free of clipped contributions?"""
    # unknown ray of v against w (and symmetrically)
    if not v.complete_below and w.maybe_nonzero_on_ray(lo=n - v.window.lo + 1, hi=None):
        return False
    if not v.complete_above and w.maybe_nonzero_on_ray(lo=None, hi=n - v.window.hi - 1):
        return False
    if not w.complete_below and v.maybe_nonzero_on_ray(lo=n - w.window.lo + 1, hi=None):
        return False
    if not w.complete_above and v.maybe_nonzero_on_ray(lo=None, hi=n - w.window.hi - 1):
        return False
    for a in v.window.degrees():
        b = n - a
        if v.maybe_nonzero(a) and w.maybe_nonzero(b):
            if not (v.exact_at(a) and w.exact_at(b)):
                return False
    return True


def tensor(v, w, window):
    """Graded tensor product restricted to a window.

    Labels are (left, right) pairs; a degree is flagged exact only when
    every mathematically possible contribution lies inside both input
    windows and was itself exact.
    """
    labels = {}
    exact = {}
    for n in window.degrees():
        labs = []
        for a in v.window.degrees():
            b = n - a
            la = v.labels.get(a)
            lb = w.labels.get(b)
            if la and lb:
                for x in la:
                    for y in lb:
                        labs.append((x, y))
        if labs:
            labels[n] = tuple(labs)
        exact[n] = _pair_exact(v, w, n)
    complete_below = complete_above = False
    if v.complete_below and w.complete_below:
        mv, mw = v.min_support(), w.min_support()
        if mv is None or mw is None:
            complete_below = True
        else:
            complete_below = window.lo <= mv + mw
    if v.complete_above and w.complete_above:
        mv, mw = v.max_support(), w.max_support()
        if mv is None or mw is None:
            complete_above = True
        else:
            complete_above = window.hi >= mv + mw
    return GradedVectorSpace(window, labels, exact,
                             complete_below=complete_below,
                             complete_above=complete_above)


def hom_space(v, w, shift=None, window=None):
    """Graded maps v -> w; the degree-s component is hom of degree s.

    Realized as graded_dual(v) (x) w, so exactness flags follow the
    tensor rule.  With ``shift`` given, returns the single component at
    that degree (as a one-degree space).
    """
    dv = graded_dual(v)
    if shift is not None:
        window = DegreeWindow(shift, shift)
    elif window is None:
        lo = dv.window.lo + w.window.lo
        hi = dv.window.hi + w.window.hi
        window = DegreeWindow(lo, hi)
    return tensor(dv, w, window)


def hom_dim(v, w, shift):
    return hom_space(v, w, shift=shift).dim(shift)


class GradedMap:
    """Internal-degree-homogeneous linear map between graded spaces.

    The block at source degree d is a SparseMatrix from the degree-d
    component of the source to the degree d+degree_shift component of
    the target (columns indexed by source basis order).
    """

    __slots__ = ("source", "target", "degree_shift", "blocks", "incomplete_degrees")

    def __init__(self, source, target, degree_shift, blocks, incomplete_degrees=()):
        self.source = source
        self.target = target
        self.degree_shift = degree_shift
        self.incomplete_degrees = set(incomplete_degrees)
        self.blocks = {}
        for d, m in blocks.items():
            td = d + degree_shift
            rows = target.dim(td) if td in target.window else 0
            if m.rows != rows or m.cols != source.dim(d):
                raise ValueError(
                    f"block at degree {d} has shape {m.rows}x{m.cols}, "
                    f"expected {rows}x{source.dim(d)}")
            if not m.is_zero():
                self.blocks[d] = m
        # absent blocks are zero maps

    @classmethod
    def zero(cls, source, target, degree_shift=0):
        return cls(source, target, degree_shift, {})

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0,
                   {d: SparseMatrix.identity(space.dim(d)) for d in space.degrees()})

    def block(self, d):
        m = self.blocks.get(d)
        if m is not None:
            return m
        td = d + self.degree_shift
        rows = self.target.dim(td) if td in self.target.window else 0
        return SparseMatrix.zero(rows, self.source.dim(d))

    def compose(self, other):
        """self . other (apply other first)."""
        if other.target is not self.source and other.target.dims() != self.source.dims():
            raise ValueError("composition mismatch")
        shift = self.degree_shift + other.degree_shift
        blocks = {}
        for d in other.source.degrees():
            mid = d + other.degree_shift
            if mid not in self.source.window:
                continue
            blocks[d] = self.block(mid) * other.block(d)
        return GradedMap(other.source, self.target, shift, blocks)

    def add(self, other):
        if self.degree_shift != other.degree_shift:
            raise ValueError("shift mismatch")
        blocks = {}
        for d in set(self.blocks) | set(other.blocks):
            blocks[d] = self.block(d) + other.block(d)
        return GradedMap(self.source, self.target, self.degree_shift, blocks)

    def scale(self, a):
        return GradedMap(self.source, self.target, self.degree_shift,
                         {d: m.scale(a) for d, m in self.blocks.items()})

    def is_zero(self):
        return all(m.is_zero() for m in self.blocks.values())

    def __repr__(self):
        return (f"GradedMap(shift={self.degree_shift}, "
                f"blocks={{{', '.join(f'{d}: {m.rows}x{m.cols}' for d, m in sorted(self.blocks.items()))}}})")
