"""Semi-infinite exterior forms, the critical cocycle and the BRST/Feigin
differential on truncations.

The Fock space is the Clifford module generated by a vacuum killed by
the positive part of the algebra and the dual of the non-positive part;
monomials carry a fermionic degree (stars minus bars) and the internal
degree inherited from the algebra grading.  Operators are assembled as
exact matrices per (internal degree, fermionic degree) block, normal
ordering moves vacuum annihilators right with the permutation sign, and
d^2 = 0 is certified blockwise wherever the truncation is clean.
"""

from dataclasses import dataclass
from fractions import Fraction

from .exact_linalg import SparseMatrix, rat


class TraceIncompleteError(Exception):
    pass


class SemiInfiniteStructureMissing(Exception):
    """No one-cochain beta with d beta = critical cocycle exists on the
    fully-computed pairs."""


@dataclass
class CocycleTable:
    """Antisymmetric table on degree-sum-zero basis pairs, with a
    trace-completeness flag per pair."""
    lie: object
    values: dict        # (label, label) -> Fraction
    complete: dict      # (label, label) -> bool

    def value(self, a, b):
        return self.values.get((a, b), Fraction(0))

    def is_zero_on_complete(self):
        return all(v == 0 for k, v in self.values.items() if self.complete.get(k))

    def check_antisymmetry(self):
        for (a, b), v in self.values.items():
            if self.values.get((b, a), Fraction(0)) != -v:
                return False
        return True

    def check_cocycle_identity(self):
        """omega([x,y],z) + omega([y,z],x) + omega([z,x],y) = 0 on all
        triples whose brackets stay in the window and whose pairs are
        trace-complete; returns the list of violations."""
        lie = self.lie
        bad = []
        n = len(lie.labels)
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    labs = (lie.labels[i], lie.labels[j], lie.labels[k])
                    if sum(lie.degrees[l] for l in labs) != 0:
                        continue
                    acc = Fraction(0)
                    ok = True
                    for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                        combo, known = lie.bracket(x, y)
                        if not known:
                            ok = False
                            break
                        for w, c in combo.items():
                            pair = (lie.labels[w], lie.labels[z])
                            if not self.complete.get(pair, False) and \
                                    self.values.get(pair) is None:
                                ok = False
                                break
                            if not self.complete.get(pair, False):
                                ok = False
                                break
                            acc += c * self.value(*pair)
                        if not ok:
                            break
                    if ok and acc != 0:
                        bad.append(labs)
        return bad


def critical_cocycle(lie, window=None):
    """omega_0(a, b) = tr(b_-+ a_+- - a_-+ b_+-) pulled back along ad,
    computed over the windowed basis with per-pair completeness flags.

    A pair is trace-complete when every degree that could contribute to
    the trace lies inside the window and all needed brackets are known.
    """
    window = window or lie.window
    values = {}
    complete = {}
    labels = lie.labels
    by_degree = {}
    for l in labels:
        by_degree.setdefault(lie.degrees[l], []).append(l)

    def one_sided(a, b):
        """tr over V_- of (ad b)_-+ (ad a)_+- for deg a > 0."""
        da = lie.degrees[a]
        acc = Fraction(0)
        ok = True
        if -da + 1 < window.lo and not lie.complete_below:
            ok = False
        if da > window.hi and not lie.complete_above:
            ok = False
        for m in range(max(-da + 1, window.lo), 1):
            for v in by_degree.get(m, []):
                combo1, known = lie.bracket(lie.index[a], lie.index[v])
                if not known:
                    ok = False
                    continue
                for u, c1 in combo1.items():
                    ul = labels[u]
                    if lie.degrees[ul] <= 0:
                        continue  # not the +- block
                    combo2, known2 = lie.bracket(lie.index[b], u)
                    if not known2:
                        ok = False
                        continue
                    c2 = combo2.get(lie.index[v], Fraction(0))
                    acc += c1 * c2
        return acc, ok

    for a in labels:
        for b in labels:
            da, db = lie.degrees[a], lie.degrees[b]
            if da + db != 0 or a == b:
                continue
            if da > 0:
                v1, ok1 = one_sided(a, b)
                # the second trace term needs V_- vectors of degree > da: none
                values[(a, b)] = v1
                complete[(a, b)] = ok1
            elif da == 0:
                # degree-0 pairs: both off-diagonal ad blocks vanish
                values[(a, b)] = Fraction(0)
                complete[(a, b)] = True
            else:
                v1, ok1 = one_sided(b, a)
                values[(a, b)] = -v1
                complete[(a, b)] = ok1
    return CocycleTable(lie, {k: v for k, v in values.items()},
                        complete)


def solve_semiinfinite_structure(lie, cocycle):
    """Find beta supported in degree 0 with beta([x, y]) = omega_0(x, y)
    on all trace-complete pairs; raises SemiInfiniteStructureMissing when
    the linear system is inconsistent."""
    unknowns = [l for l in lie.labels if lie.degrees[l] == 0]
    rows, rhs = [], []
    n = len(lie.labels)
    for i in range(n):
        for j in range(n):
            a, b = lie.labels[i], lie.labels[j]
            if lie.degrees[a] + lie.degrees[b] != 0:
                continue
            if not cocycle.complete.get((a, b), False):
                continue
            combo, known = lie.bracket(i, j)
            if not known:
                continue
            row = {}
            for z, c in combo.items():
                zl = lie.labels[z]
                if zl in unknowns:
                    row[zl] = row.get(zl, Fraction(0)) + c
                elif c != 0:
                    row = None
                    break
            if row is None:
                continue
            rows.append(row)
            rhs.append(cocycle.value(a, b))
    if not unknowns:
        if any(v != 0 for v in rhs):
            raise SemiInfiniteStructureMissing("nonzero cocycle, no degree-0 cochain")
        return {}
    mat = SparseMatrix(len(rows), len(unknowns),
                       {(i, j): row.get(u, Fraction(0))
                        for i, row in enumerate(rows)
                        for j, u in enumerate(unknowns) if row.get(u)})
    try:
        sol = mat.solve(rhs)
    except Exception as exc:
        raise SemiInfiniteStructureMissing(str(exc))
    return {u: sol[j] for j, u in enumerate(unknowns) if sol[j] != 0}


class FockSpace:
    """Truncated space of semi-infinite exterior forms on a graded Lie
    algebra: monomials bar-e_{i1}..bar-e_{im} bar-e*_{j1}..bar-e*_{jn} x0
    with the i's from the non-positive part and the j's from the positive
    part, both strictly increasing in the fixed letter order.

    Bidegrees: fermionic n - m, internal sum deg(i) - sum deg(j) (always
    <= 0).  ``weight_cap`` bounds -internal.
    """

    def __init__(self, lie, weight_cap):
        self.lie = lie
        self.weight_cap = int(weight_cap)
        order = sorted(lie.labels, key=lambda l: (lie.degrees[l], l))
        self.minus_letters = tuple(l for l in order if lie.degrees[l] <= 0)
        self.plus_letters = tuple(l for l in order if lie.degrees[l] > 0)
        self._rank_minus = {l: i for i, l in enumerate(self.minus_letters)}
        self._rank_plus = {l: i for i, l in enumerate(self.plus_letters)}
        self._enumerate()

    def _enumerate(self):
        minus_subsets = [()]
        for l in self.minus_letters:
            minus_subsets += [s + (l,) for s in minus_subsets]
        plus_subsets = [()]
        for l in self.plus_letters:
            plus_subsets += [s + (l,) for s in plus_subsets]
        self.basis = {}
        for front in minus_subsets:
            dfront = sum(self.lie.degrees[l] for l in front)
            if dfront < -self.weight_cap:
                continue
            for back in plus_subsets:
                delta = dfront - sum(self.lie.degrees[l] for l in back)
                if delta < -self.weight_cap:
                    continue
                F = len(back) - len(front)
                self.basis.setdefault((delta, F), []).append((front, back))
        for key in self.basis:
            self.basis[key].sort()
        self._index = {key: {mon: i for i, mon in enumerate(mons)}
                       for key, mons in self.basis.items()}
        # exactness: weight w needs all letters of |degree| <= w present
        self.weight_exact = {}
        for w in range(0, self.weight_cap + 1):
            ok = True
            if not self.lie.complete_below and -w < self.lie.window.lo:
                ok = False
            if not self.lie.complete_above and w > self.lie.window.hi:
                ok = False
            self.weight_exact[-w] = ok

    def dim(self, delta, fermionic):
        return len(self.basis.get((delta, fermionic), ()))

    def dims_table(self):
        return {key: len(v) for key, v in self.basis.items()}

    def vacuum(self):
        return ((), ())

    # -- Clifford generators -------------------------------------------------

    def apply_e(self, v, mon):
        """bar-e_v applied to a monomial: [(monomial, coeff)] (empty = 0)."""
        front, back = mon
        if self.lie.degrees[v] <= 0:
            if v in front:
                return []
            p = 0
            while p < len(front) and self._rank_minus[front[p]] < self._rank_minus[v]:
                p += 1
            sign = -1 if p % 2 else 1
            return [((front[:p] + (v,) + front[p:], back), Fraction(sign))]
        # annihilator: contract against a matching star
        if v not in back:
            return []
        t = back.index(v)
        sign = -1 if (len(front) + t) % 2 else 1
        return [((front, back[:t] + back[t + 1:]), Fraction(sign))]

    def apply_estar(self, w, mon):
        """bar-e*_w applied to a monomial."""
        front, back = mon
        if self.lie.degrees[w] > 0:
            if w in back:
                return []
            q = 0
            while q < len(back) and self._rank_plus[back[q]] < self._rank_plus[w]:
                q += 1
            sign = -1 if (len(front) + q) % 2 else 1
            return [((front, back[:q] + (w,) + back[q:]), Fraction(sign))]
        # annihilator: contract against a matching bar-e in the front block
        if w not in front:
            return []
        s = front.index(w)
        sign = -1 if s % 2 else 1
        return [((front[:s] + front[s + 1:], back), Fraction(sign))]

    def operator_matrix(self, ops, delta, fermionic):
        """Matrix of a composite Clifford word (applied right-to-left) from
        the (delta, fermionic) block.  ops: list of ("e"|"e*", label)."""
        dshift = 0
        fshift = 0
        for kind, lab in ops:
            d = self.lie.degrees[lab]
            if kind == "e":
                dshift += d
                fshift -= 1
            else:
                dshift += -d
                fshift += 1
        src = self.basis.get((delta, fermionic), [])
        tgt_key = (delta + dshift, fermionic + fshift)
        tgt_index = self._index.get(tgt_key, {})
        entries = {}
        for col, mon in enumerate(src):
            terms = [(mon, Fraction(1))]
            for kind, lab in reversed(ops):
                new = []
                for m, c in terms:
                    hits = self.apply_e(lab, m) if kind == "e" else self.apply_estar(lab, m)
                    for mm, cc in hits:
                        new.append((mm, c * cc))
                terms = new
            for mm, cc in terms:
                row = tgt_index.get(mm)
                if row is None:
                    continue
                key = (row, col)
                entries[key] = entries.get(key, Fraction(0)) + cc
        return SparseMatrix(len(self._index.get(tgt_key, {})), len(src),
                            {k: v for k, v in entries.items() if v != 0})

    def normal_order(self, ops):
        """Reorder a Clifford word so vacuum annihilators stand right, with
        the permutation sign (contractions dropped, per the definition)."""

        def is_annihilator(op):
            kind, lab = op
            d = self.lie.degrees[lab]
            return (kind == "e" and d > 0) or (kind == "e*" and d <= 0)

        ops = list(ops)
        sign = 1
        changed = True
        while changed:
            changed = False
            for i in range(len(ops) - 1):
                if is_annihilator(ops[i]) and not is_annihilator(ops[i + 1]):
                    ops[i], ops[i + 1] = ops[i + 1], ops[i]
                    sign = -sign
                    changed = True
        return ops, sign


def build_fock(lie, weight_cap):
    return FockSpace(lie, weight_cap)


class FeiginComplex:
    """M (x) Fock with d = sum_i rho(e_i) (x) bar-e*_i
    - sum_{i<j} 1 (x) :overline{[e_i,e_j]} bar-e*_i bar-e*_j: + 1 (x) beta-bar.

    M is a right module over the enveloping of the same Lie algebra,
    presented as a graded space with generator action matrices.  Blocks
    are indexed by (internal degree, fermionic degree); d raises the
    fermionic degree by 1 and preserves the internal degree.
    """

    def __init__(self, module, fock, beta=None, check_beta=True):
        self.module = module
        self.fock = fock
        self.lie = fock.lie
        beta = {l: rat(v) for l, v in (beta or {}).items() if rat(v) != 0}
        self.beta = beta
        if check_beta:
            self._check_beta()
        self._blocks = {}
        self._block_clean = {}
        # letters missing beyond the algebra window cannot contribute to
        # any block iff the window covers [-weight_cap, weight_cap]
        lie = self.lie
        self._letters_ok = (lie.complete_below or lie.window.lo <= -fock.weight_cap) and                            (lie.complete_above or lie.window.hi >= fock.weight_cap)

    def _check_beta(self):
        table = critical_cocycle(self.lie)
        lie = self.lie
        for (a, b), ok in table.complete.items():
            if not ok:
                continue
            combo, known = lie.bracket(lie.index[a], lie.index[b])
            if not known:
                continue
            val = Fraction(0)
            for z, c in combo.items():
                val += c * self.beta.get(lie.labels[z], Fraction(0))
            if val != table.value(a, b):
                raise SemiInfiniteStructureMissing(
                    f"d beta != critical cocycle on complete pair ({a},{b})")

    def basis(self, delta, fermionic):
        """Pairs (module label, fock monomial) at the bidegree."""
        out = []
        for dm in self.module.space.degrees():
            df = delta - dm
            for mon in self.fock.basis.get((df, fermionic), []):
                for mlab in self.module.space.basis(dm):
                    out.append((mlab, dm, mon))
        return out

    def dim(self, delta, fermionic):
        return len(self.basis(delta, fermionic))

    def block_clean(self, delta, fermionic):
        self.block(delta, fermionic)
        return self._block_clean[(delta, fermionic)]

    def block(self, delta, fermionic):
        """Matrix of d from (delta, fermionic) to (delta, fermionic + 1)."""
        key = (delta, fermionic)
        if key in self._blocks:
            return self._blocks[key]
        src = self.basis(delta, fermionic)
        tgt = self.basis(delta, fermionic + 1)
        tindex = {lab: i for i, lab in enumerate(tgt)}
        entries = {}
        clean = True
        mspace = self.module.space
        for col, (mlab, dm, mon) in enumerate(src):
            # linear term: rho(e_i) (x) bar-e*_i over every basis letter
            for i, lab in enumerate(self.lie.labels):
                di = self.lie.degrees[lab]
                hits = self.fock.apply_estar(lab, mon)
                if not hits:
                    continue
                act = self.module.action[lab]
                if dm + di not in mspace.window:
                    if mspace.maybe_nonzero_on_ray(dm + di, dm + di):
                        clean = False
                    continue
                if dm in act.incomplete_degrees:
                    clean = False
                blk = act.block(dm)
                mcol = mspace.index(dm, mlab)
                tlabels = mspace.basis(dm + di)
                for (r, c), v in blk.entries.items():
                    if c != mcol:
                        continue
                    for mm, cc in hits:
                        row = tindex.get((tlabels[r], dm + di, mm))
                        if row is None:
                            clean = False
                            continue
                        entries[(row, col)] = entries.get((row, col), Fraction(0)) + v * cc
            # quadratic term: -sum_{i<j} :overline{[e_i,e_j]} e*_i e*_j:
            labs = self.lie.labels
            for i in range(len(labs)):
                for j in range(i + 1, len(labs)):
                    combo, known = self.lie.bracket(i, j)
                    if not combo and known:
                        continue
                    if not known:
                        # an unknown bracket can only contribute if the
                        # stars act nonzero on this monomial
                        if self.fock.apply_estar(labs[i], mon) and \
                                self.fock.apply_estar(labs[j], mon):
                            clean = False
                        continue
                    for z, c in combo.items():
                        ops = [("e", labs[z]), ("e*", labs[i]), ("e*", labs[j])]
                        ops, sign = self.fock.normal_order(ops)
                        terms = [(mon, Fraction(1))]
                        for kind, lab in reversed(ops):
                            new = []
                            for m, coeff in terms:
                                hits = (self.fock.apply_e(lab, m) if kind == "e"
                                        else self.fock.apply_estar(lab, m))
                                for mm, cc in hits:
                                    new.append((mm, coeff * cc))
                            terms = new
                        for mm, cc in terms:
                            row = tindex.get((mlab, dm, mm))
                            if row is None:
                                clean = False
                                continue
                            val = -c * sign * cc
                            entries[(row, col)] = entries.get((row, col), Fraction(0)) + val
            # beta term
            for lab, bv in self.beta.items():
                for mm, cc in self.fock.apply_estar(lab, mon):
                    row = tindex.get((mlab, dm, mm))
                    if row is None:
                        clean = False
                        continue
                    entries[(row, col)] = entries.get((row, col), Fraction(0)) + bv * cc
            if dm in self.module.incomplete:
                clean = False
        m = SparseMatrix(len(tgt), len(src), {k: v for k, v in entries.items() if v != 0})
        clean = clean and self._letters_ok
        self._blocks[key] = m
        self._block_clean[key] = clean
        return m

    def d_squared_zero(self, delta, fermionic):
        """Exact check of d^2 = 0 out of the given bidegree."""
        d1 = self.block(delta, fermionic)
        d2 = self.block(delta, fermionic + 1)
        return (d2 * d1).is_zero()

    def cohomology_dim(self, delta, fermionic):
        """(dimension, clean flag) at the bidegree."""
        d_out = self.block(delta, fermionic)
        d_in = self.block(delta, fermionic - 1)
        dim = (d_out.cols - d_out.rank()) - d_in.rank()
        clean = (self.block_clean(delta, fermionic)
                 and self.block_clean(delta, fermionic - 1)
                 and self.d_squared_zero(delta, fermionic - 1)
                 and self.d_squared_zero(delta, fermionic))
        return dim, clean


def feigin_differential(module, fock, beta=None, check_beta=True):
    return FeiginComplex(module, fock, beta, check_beta)


def brst_cohomology(module, fock, beta, weights, fermionic_degrees=(-1, 0, 1),
                    check_beta=True):
    """Dimension table {(fermionic, weight): (dim, clean)} of the Feigin
    complex; weights are non-negative integers (internal degree -w)."""
    cplx = FeiginComplex(module, fock, beta, check_beta)
    table = {}
    for w in weights:
        for f in fermionic_degrees:
            table[(f, w)] = cplx.cohomology_dim(-w, f)
    return table
