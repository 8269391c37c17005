"""Chain complexes of graded spaces, almost-double complexes and their
totalizations, cohomology with representative bases, and the two
"partially bounded" double-complex lemmas as executable verdicts.

Conventions: differentials raise cohomological degree by 1 and preserve
internal degree.  Almost-double complexes store anticommuting d1, d2
(Koszul signs are folded into d2 by the builders), so the total
differential d1 + d2 squares to zero on the nose.
"""

from dataclasses import dataclass, field

from .exact_linalg import SparseMatrix, quotient_extension_basis
from .graded import DegreeWindow, GradedMap, GradedVectorSpace


class ComplexError(Exception):
    """d^2 != 0 or mismatched terms."""


class InfiniteColumnError(Exception):
    """Totalization cannot certify per-degree finiteness on this window."""


class HypothesisViolated(Exception):
    """A lemma's hypothesis fails; no verdict is claimed."""


@dataclass
class CohomologyResult:
    dim: int
    basis: list  # representative vectors as {label: coefficient}
    exact: bool


class ChainComplex:
    """terms: {cohomological degree: GradedVectorSpace};
    differentials: {k: GradedMap terms[k] -> terms[k+1], shift 0}.

    d . d = 0 is checked exactly at construction.  ``inexact_positions``
    marks (k, internal degree) spots whose matrices were assembled from
    incomplete truncated products.
    """

    def __init__(self, terms, differentials, inexact_positions=frozenset(), check=True):
        self.terms = {k: t for k, t in terms.items() if t.total_dim() or True}
        self.differentials = dict(differentials)
        self.inexact_positions = set(inexact_positions)
        for k, d in self.differentials.items():
            if d.degree_shift != 0:
                raise ComplexError("differentials must preserve internal degree")
            if d.source is not self.terms.get(k) or d.target is not self.terms.get(k + 1):
                raise ComplexError(f"differential at {k} does not match terms")
        if check:
            self._check_d_squared()

    def _check_d_squared(self):
        """d.d = 0 exactly, blockwise; positions whose matrices were
        clipped by truncation (flagged inexact) are exempt, since face
        terms genuinely fall off the window there."""
        for k, d in self.differentials.items():
            d_next = self.differentials.get(k + 1)
            if d_next is None:
                continue
            comp = d_next.compose(d)
            for delta, blk in comp.blocks.items():
                if blk.is_zero():
                    continue
                if any((kk, delta) in self.inexact_positions for kk in (k, k + 1, k + 2)):
                    continue
                raise ComplexError(f"d^2 != 0 at position {k}, degree {delta}")

    def degrees(self):
        return sorted(self.terms)

    def term(self, k):
        return self.terms.get(k)

    def internal_degrees(self):
        out = set()
        for t in self.terms.values():
            out.update(t.degrees())
        return sorted(out)

    def _din_dout(self, k, delta):
        t = self.terms.get(k)
        mid = t.dim(delta) if t else 0
        din = self.differentials.get(k - 1)
        dout = self.differentials.get(k)
        m_in = din.block(delta) if din else SparseMatrix.zero(mid, 0)
        m_out = dout.block(delta) if dout else SparseMatrix.zero(0, mid)
        if m_in.rows != mid:
            m_in = SparseMatrix.zero(mid, m_in.cols)
        if m_out.cols != mid:
            m_out = SparseMatrix.zero(m_out.rows, mid)
        return m_in, m_out

    def position_exact(self, k, delta):
        for kk in (k - 1, k, k + 1):
            t = self.terms.get(kk)
            if t is not None and not t.exact_at(delta):
                return False
            if (kk, delta) in self.inexact_positions:
                return False
        return True

    def cohomology(self, k, delta):
        """Exact dimension and reduced representative basis at (k, delta)."""
        m_in, m_out = self._din_dout(k, delta)
        if not (m_out * m_in).is_zero():
            raise ComplexError(f"d^2 != 0 at ({k},{delta})")
        t = self.terms.get(k)
        mid = t.dim(delta) if t else 0
        image_cols = []
        for c in range(m_in.cols):
            col = {r: v for (r, cc), v in m_in.entries.items() if cc == c}
            if col:
                image_cols.append(col)
        kernel = m_out.kernel_basis()
        kernel_cols = [{i: x for i, x in enumerate(vec) if x != 0} for vec in kernel]
        picked = quotient_extension_basis(image_cols, kernel_cols, mid)
        labels = t.basis(delta) if t else ()
        basis = []
        for i in picked:
            vec = kernel_cols[i]
            basis.append({labels[r]: v for r, v in sorted(vec.items())})
        dim = (mid - m_out.rank()) - m_in.rank()
        assert dim == len(picked)
        return CohomologyResult(dim, basis, self.position_exact(k, delta))

    def cohomology_table(self, internal_degrees=None):
        """{(k, delta): (dim, exact flag)} over the support."""
        if internal_degrees is None:
            internal_degrees = self.internal_degrees()
        table = {}
        ks = self.degrees()
        if not ks:
            return table
        for k in range(min(ks), max(ks) + 1):
            for delta in internal_degrees:
                res = self.cohomology(k, delta)
                t = self.terms.get(k)
                if res.dim or (t and t.dim(delta)):
                    table[(k, delta)] = (res.dim, res.exact)
        return table

    def euler_characteristic(self, delta):
        return sum((1 if k % 2 == 0 else -1) * t.dim(delta)
                   for k, t in self.terms.items())


def shift_complex(c, n):
    """Cohomological shift [n]: term k of the result is term k+n, with the
    differential rescaled by (-1)^n."""
    terms = {k - n: t for k, t in c.terms.items()}
    diffs = {}
    for k, d in c.differentials.items():
        diffs[k - n] = d.scale(1 if n % 2 == 0 else -1)
    return ChainComplex(terms, diffs,
                        {(k - n, delta) for (k, delta) in c.inexact_positions})


class AlmostDoubleComplex:
    """components: {(p, q): GradedVectorSpace}; d1: (p,q)->(p+1,q);
    d2: (p,q)->(p,q+1), with d1^2 = d2^2 = d1 d2 + d2 d1 = 0 exactly.

    ``vanishing_certified`` maps internal degree -> bool: True means every
    component outside the stored keys is zero at that degree (the
    builder's finiteness certificate).  Default: certified everywhere.
    """

    def __init__(self, components, d1, d2, vanishing_certified=None,
                 inexact_positions=frozenset(), check=True):
        self.components = {pq: s for pq, s in components.items()}
        self.d1 = dict(d1)
        self.d2 = dict(d2)
        self.inexact_positions = set(inexact_positions)
        if vanishing_certified is None:
            self.vanishing_certified = {}
            self._default_certified = True
        elif isinstance(vanishing_certified, dict):
            self.vanishing_certified = dict(vanishing_certified)
            self._default_certified = False
        else:
            self.vanishing_certified = {}
            self._default_certified = bool(vanishing_certified)
        if check:
            self._check_squares()

    def certified(self, delta):
        return self.vanishing_certified.get(delta, self._default_certified)

    def map1(self, p, q):
        return self.d1.get((p, q))

    def map2(self, p, q):
        return self.d2.get((p, q))

    def _compose_or_zero(self, f, g):
        # f after g; either may be None (zero)
        if f is None or g is None:
            return None
        return f.compose(g)

    def _check_squares(self):
        for (p, q) in self.components:
            c = self._compose_or_zero(self.map1(p + 1, q), self.map1(p, q))
            if c is not None and not c.is_zero():
                raise ComplexError(f"d1^2 != 0 at {(p, q)}")
            c = self._compose_or_zero(self.map2(p, q + 1), self.map2(p, q))
            if c is not None and not c.is_zero():
                raise ComplexError(f"d2^2 != 0 at {(p, q)}")
            a = self._compose_or_zero(self.map2(p + 1, q), self.map1(p, q))
            b = self._compose_or_zero(self.map1(p, q + 1), self.map2(p, q))
            if a is None and b is None:
                continue
            s = a.add(b) if (a and b) else (a or b)
            if not s.is_zero():
                raise ComplexError(f"d1 d2 + d2 d1 != 0 at {(p, q)}")

    def internal_degrees(self):
        out = set()
        for s in self.components.values():
            out.update(s.degrees())
        return sorted(out)

    def row(self, q):
        """The d1-complex at height q as a ChainComplex in p."""
        terms = {p: s for (p, qq), s in self.components.items() if qq == q}
        diffs = {p: self.d1[(p, q)] for (p, qq) in self.d1 if qq == q
                 and (p + 1, q) in self.components}
        return ChainComplex(terms, diffs, check=False)


def total_complex(adc, window):
    """Direct-product totalization X^n = prod_{p+q=n} X^{p,q} on a window.

    Requires the builder's finiteness certificate on every internal
    degree of the window; raises InfiniteColumnError otherwise.  Basis
    labels are ((p, q), original label).
    """
    for delta in window.degrees():
        if not adc.certified(delta):
            raise InfiniteColumnError(
                f"no finiteness certificate at internal degree {delta}")
    by_total = {}
    for (p, q), s in adc.components.items():
        by_total.setdefault(p + q, []).append((p, q))
    for n in by_total:
        by_total[n].sort()
    terms = {}
    offsets = {}
    inexact = set()
    for n, pqs in sorted(by_total.items()):
        labels = {}
        exact = {}
        for delta in window.degrees():
            labs = []
            off = {}
            ok = True
            for pq in pqs:
                s = adc.components[pq]
                off[pq] = len(labs)
                for lab in s.basis(delta):
                    labs.append((pq, lab))
                if not s.exact_at(delta):
                    ok = False
                if (pq, delta) in adc.inexact_positions:
                    ok = False
            if labs:
                labels[delta] = tuple(labs)
            exact[delta] = ok
            offsets[(n, delta)] = off
            if not ok:
                inexact.add((n, delta))
        terms[n] = GradedVectorSpace(window, labels, exact,
                                     complete_below=True, complete_above=True)
    diffs = {}
    for n in sorted(by_total):
        if n + 1 not in terms:
            continue
        blocks = {}
        for delta in window.degrees():
            src = terms[n]
            tgt = terms[n + 1]
            rows, cols = tgt.dim(delta), src.dim(delta)
            entries = {}
            for pq in by_total[n]:
                src_off = offsets[(n, delta)][pq]
                s = adc.components[pq]
                sd = s.dim(delta)
                if not sd:
                    continue
                for shift, mp in ((1, adc.map1(*pq)), (2, adc.map2(*pq))):
                    if mp is None:
                        continue
                    tpq = (pq[0] + 1, pq[1]) if shift == 1 else (pq[0], pq[1] + 1)
                    if tpq not in offsets.get((n + 1, delta), {}):
                        continue
                    tgt_off = offsets[(n + 1, delta)][tpq]
                    blk = mp.block(delta)
                    for (r, c), v in blk.entries.items():
                        entries[(tgt_off + r, src_off + c)] = \
                            entries.get((tgt_off + r, src_off + c), 0) + v
            blocks[delta] = SparseMatrix(rows, cols,
                                         {rc: v for rc, v in entries.items() if v != 0})
        diffs[n] = GradedMap(terms[n], terms[n + 1], 0, blocks)
    return ChainComplex(terms, diffs, inexact)


def transpose_adc(adc):
    """Swap the two directions (p,q) -> (q,p); d1 and d2 swap roles."""
    comps = {(q, p): s for (p, q), s in adc.components.items()}
    d1 = {(q, p): m for (p, q), m in adc.d2.items()}
    d2 = {(q, p): m for (p, q), m in adc.d1.items()}
    return AlmostDoubleComplex(comps, d1, d2,
                               dict(adc.vanishing_certified) if adc.vanishing_certified else (
                                   adc._default_certified),
                               adc.inexact_positions, check=False)


def check_homotopy_lemma_A(adc, homotopies, window):
    """Rows nullhomotopic (h d1 + d1 h = id, verified exactly) and bounded
    above in q  =>  total complex acyclic on certified degrees.

    homotopies: {q: {p: GradedMap X^{p,q} -> X^{p-1,q}}}.
    Returns the verified total-cohomology table (all zeros).
    """
    qs = sorted({q for (_, q) in adc.components})
    if not qs:
        return {}
    for (p, q), s in adc.components.items():
        if s.total_dim() == 0:
            continue
        h_here = homotopies.get(q, {}).get(p)
        h_next = homotopies.get(q, {}).get(p + 1)
        d_prev = adc.map1(p - 1, q)
        d_here = adc.map1(p, q)
        acc = None
        if h_next is not None and d_here is not None:
            acc = h_next.compose(d_here)
        if d_prev is not None and h_here is not None:
            t = d_prev.compose(h_here)
            acc = t if acc is None else acc.add(t)
        ident = GradedMap.identity(s)
        if acc is None or not acc.add(ident.scale(-1)).is_zero():
            raise HypothesisViolated(f"h d1 + d1 h != id on row q={q} at p={p}")
    total = total_complex(adc, window)
    table = {}
    for k in total.degrees():
        for delta in window.degrees():
            res = total.cohomology(k, delta)
            if res.exact and res.dim != 0:
                raise ComplexError(
                    f"lemma conclusion fails: H^{k} at internal degree {delta} nonzero")
            table[(k, delta)] = (res.dim, res.exact)
    return table


def check_acyclic_lemma_B(adc, window):
    """Exact rows supported in q >= 0  =>  total complex acyclic on
    certified degrees.  Row exactness is verified by exact ranks."""
    for (p, q), s in adc.components.items():
        if q < 0 and s.total_dim() > 0:
            raise HypothesisViolated(f"component at q={q} < 0 is nonzero")
    qs = sorted({q for (_, q) in adc.components})
    for q in qs:
        row = adc.row(q)
        for p in row.degrees():
            for delta in row.terms[p].degrees():
                res = row.cohomology(p, delta)
                if res.exact and res.dim != 0:
                    raise HypothesisViolated(
                        f"row q={q} not exact at (p={p}, degree {delta})")
    total = total_complex(adc, window)
    table = {}
    for k in total.degrees():
        for delta in window.degrees():
            res = total.cohomology(k, delta)
            if res.exact and res.dim != 0:
                raise ComplexError(
                    f"lemma conclusion fails: H^{k} at internal degree {delta} nonzero")
            table[(k, delta)] = (res.dim, res.exact)
    return table


def hom_complex(x, y, window=None):
    """hom(X, Y) with terms prod_p hom(X^p, Y^{p+n}) and differential
    d f = d_Y . f - (-1)^n f . d_X; d^2 = 0 is verified at construction.

    Basis labels are (p, x label, y label); the internal degree of
    (p, a, b) is deg(b) - deg(a).
    """
    if window is None:
        degs = set()
        for t in list(x.terms.values()) + list(y.terms.values()):
            degs.update(t.degrees())
        if not degs:
            window = DegreeWindow(0, 0)
        else:
            m = max(abs(d) for d in degs)
            window = DegreeWindow(-2 * m - 1, 2 * m + 1)
    xks = x.degrees()
    yks = y.degrees()
    if not xks or not yks:
        return ChainComplex({}, {})
    ns = range(min(yks) - max(xks), max(yks) - min(xks) + 1)
    terms = {}
    index = {}
    for n in ns:
        labels = {}
        for p in xks:
            xt = x.terms[p]
            yt = y.terms.get(p + n)
            if yt is None:
                continue
            for da in xt.degrees():
                for db in yt.degrees():
                    delta = db - da
                    if delta not in window:
                        continue
                    for a in xt.basis(da):
                        for b in yt.basis(db):
                            labels.setdefault(delta, []).append((p, a, b))
        term = GradedVectorSpace(window, {d: tuple(v) for d, v in labels.items()},
                                 complete_below=True, complete_above=True)
        terms[n] = term
        index[n] = {d: {lab: i for i, lab in enumerate(term.basis(d))}
                    for d in term.degrees()}

    def deg_of(space, k, label):
        t = space.terms[k]
        for d in t.degrees():
            if label in t.basis(d):
                return d
        raise KeyError(label)

    # precompute label degree lookups
    xdeg = {(k, lab): d for k, t in x.terms.items() for d in t.degrees() for lab in t.basis(d)}
    ydeg = {(k, lab): d for k, t in y.terms.items() for d in t.degrees() for lab in t.basis(d)}

    diffs = {}
    for n in ns:
        if n + 1 not in terms:
            continue
        blocks = {}
        for delta in window.degrees():
            src = terms[n]
            tgt = terms[n + 1]
            entries = {}
            for col, (p, a, b) in enumerate(src.basis(delta)):
                da = xdeg[(p, a)]
                db = ydeg[(p + n, b)]
                # d_Y . f : (p, a, b') entries from d_Y block
                dy = y.differentials.get(p + n)
                if dy is not None:
                    blk = dy.block(db)
                    bt = y.terms.get(p + n + 1)
                    if bt is not None and db in bt.window and blk.rows:
                        bcol = y.terms[p + n].index(db, b)
                        for (r, c), v in blk.entries.items():
                            if c != bcol:
                                continue
                            lab2 = (p, a, bt.basis(db)[r])
                            rowi = index[n + 1][delta].get(lab2)
                            if rowi is not None:
                                entries[(rowi, col)] = entries.get((rowi, col), 0) + v
                # -(-1)^n f . d_X : source (p-1, a', b) entries from d_X
                dx = x.differentials.get(p - 1)
                if dx is not None and p - 1 in x.terms:
                    xt_prev = x.terms[p - 1]
                    for dap in xt_prev.degrees():
                        if dap != da:
                            continue
                        blk = dx.block(dap)
                        acol_t = x.terms[p].index(da, a) if blk.rows else None
                        for (r, c), v in blk.entries.items():
                            if r != acol_t:
                                continue
                            lab2 = (p - 1, xt_prev.basis(dap)[c], b)
                            rowi = index[n + 1][delta].get(lab2)
                            if rowi is not None:
                                sgn = -1 if n % 2 == 0 else 1
                                entries[(rowi, col)] = entries.get((rowi, col), 0) + sgn * v
            blocks[delta] = SparseMatrix(tgt.dim(delta), src.dim(delta),
                                         {rc: v for rc, v in entries.items() if v != 0})
        diffs[n] = GradedMap(terms[n], terms[n + 1], 0, blocks)
    return ChainComplex(terms, diffs)
