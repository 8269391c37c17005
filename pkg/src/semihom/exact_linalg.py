"""Exact sparse linear algebra over the rationals.

Everything downstream (axiom checks, cohomology, BRST ranks) reduces to
rank / kernel / solve computations done here.  All arithmetic is exact:
entries are ``fractions.Fraction`` and no tolerance appears anywhere.
Results that are matrices or bases are canonicalized (reduced row echelon
form), so they do not depend on pivot heuristics.
"""

from fractions import Fraction


class ResourceCapError(Exception):
    """Matrix exceeds the configured size cap; refuse to thrash."""


class CompositionNonzeroError(Exception):
    """d_out . d_in != 0 where a complex was expected."""


class NoSolutionError(Exception):
    """Right-hand side is not in the image."""


# Dense-size cap (rows*cols).  Truncation parameters, not the elimination
# kernel, are supposed to control problem size; anything bigger is a bug
# in the caller's window/cap choice.
_ENTRY_CAP = 40_000_000


def set_entry_cap(cap):
    global _ENTRY_CAP
    _ENTRY_CAP = int(cap)


def get_entry_cap():
    return _ENTRY_CAP


def rat(x):
    """Coerce ints, strings like '3/4', and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


ZERO = Fraction(0)
ONE = Fraction(1)


class SparseMatrix:
    """Immutable sparse matrix over Q; zero entries are never stored."""

    __slots__ = ("rows", "cols", "entries", "_echelon")

    def __init__(self, rows, cols, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        if rows * cols > _ENTRY_CAP:
            raise ResourceCapError(f"{rows}x{cols} exceeds entry cap {_ENTRY_CAP}")
        self.rows = rows
        self.cols = cols
        clean = {}
        if entries:
            for (r, c), v in entries.items():
                if not (0 <= r < rows and 0 <= c < cols):
                    raise IndexError(f"entry ({r},{c}) out of range for {rows}x{cols}")
                v = rat(v)
                if v != 0:
                    clean[(r, c)] = v
        self.entries = clean
        self._echelon = None

    @classmethod
    def from_rows(cls, dense):
        rows = len(dense)
        cols = len(dense[0]) if rows else 0
        entries = {}
        for r, row in enumerate(dense):
            if len(row) != cols:
                raise ValueError("ragged rows")
            for c, v in enumerate(row):
                v = rat(v)
                if v != 0:
                    entries[(r, c)] = v
        return cls(rows, cols, entries)

    @classmethod
    def identity(cls, n):
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def zero(cls, rows, cols):
        return cls(rows, cols)

    @classmethod
    def from_columns(cls, cols_list, dim):
        """Matrix whose columns are the given sparse {index: value} dicts."""
        entries = {}
        for c, col in enumerate(cols_list):
            for r, v in col.items():
                v = rat(v)
                if v != 0:
                    entries[(r, c)] = v
        return cls(dim, len(cols_list), entries)

    def __getitem__(self, rc):
        return self.entries.get(rc, ZERO)

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and self.rows == other.rows
                and self.cols == other.cols and self.entries == other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(sorted(self.entries.items()))))

    def nnz(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def to_dense(self):
        out = [[ZERO] * self.cols for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def row_dicts(self):
        rows = [dict() for _ in range(self.rows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def transpose(self):
        return SparseMatrix(self.cols, self.rows,
                            {(c, r): v for (r, c), v in self.entries.items()})

    def __add__(self, other):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("shape mismatch")
        entries = dict(self.entries)
        for rc, v in other.entries.items():
            s = entries.get(rc, ZERO) + v
            if s == 0:
                entries.pop(rc, None)
            else:
                entries[rc] = s
        return SparseMatrix(self.rows, self.cols, entries)

    def __sub__(self, other):
        return self + other.scale(Fraction(-1))

    def scale(self, a):
        a = rat(a)
        if a == 0:
            return SparseMatrix.zero(self.rows, self.cols)
        return SparseMatrix(self.rows, self.cols,
                            {rc: a * v for rc, v in self.entries.items()})

    def __mul__(self, other):
        if not isinstance(other, SparseMatrix):
            return self.scale(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}")
        other_rows = other.row_dicts()
        acc = {}
        for (r, k), v in self.entries.items():
            for c, w in other_rows[k].items():
                rc = (r, c)
                s = acc.get(rc, ZERO) + v * w
                if s == 0:
                    acc.pop(rc, None)
                else:
                    acc[rc] = s
        return SparseMatrix(self.rows, other.cols, acc)

    def apply(self, vec):
        """Apply to a sparse column vector {index: value} -> {index: value}."""
        rows_hit = {}
        for j, x in vec.items():
            if x == 0:
                continue
            rows_hit[j] = x
        out = {}
        for (r, c), v in self.entries.items():
            x = rows_hit.get(c)
            if x is None:
                continue
            s = out.get(r, ZERO) + v * x
            if s == 0:
                out.pop(r, None)
            else:
                out[r] = s
        return out

    def stack_below(self, other):
        if self.cols != other.cols:
            raise ValueError("shape mismatch")
        entries = dict(self.entries)
        for (r, c), v in other.entries.items():
            entries[(self.rows + r, c)] = v
        return SparseMatrix(self.rows + other.rows, self.cols, entries)

    # -- elimination ----------------------------------------------------

    def _reduced_echelon(self):
        """(pivot column list, RREF rows as sorted {col: val} dicts).

        RREF is unique, so the result is independent of the pivot-row
        heuristic used while eliminating.
        """
        if self._echelon is not None:
            return self._echelon
        work = [row for row in self.row_dicts() if row]
        pivots = []
        pivot_rows = []
        col = 0
        while work and col < self.cols:
            cand = [i for i, row in enumerate(work) if col in row]
            if not cand:
                col += 1
                continue
            # fewest fill-in first; index ties keep it deterministic
            best = min(cand, key=lambda i: (len(work[i]), i))
            prow = work.pop(best)
            inv = ONE / prow[col]
            prow = {c: v * inv for c, v in prow.items()}
            for i, row in enumerate(work):
                f = row.get(col)
                if f is None:
                    continue
                new = dict(row)
                for c, v in prow.items():
                    s = new.get(c, ZERO) - f * v
                    if s == 0:
                        new.pop(c, None)
                    else:
                        new[c] = s
                work[i] = new
            work = [row for row in work if row]
            # eliminate upward so the final rows are fully reduced
            for i, row in enumerate(pivot_rows):
                f = row.get(col)
                if f is None:
                    continue
                new = dict(row)
                for c, v in prow.items():
                    s = new.get(c, ZERO) - f * v
                    if s == 0:
                        new.pop(c, None)
                    else:
                        new[c] = s
                pivot_rows[i] = new
            pivots.append(col)
            pivot_rows.append(prow)
            col += 1
        self._echelon = (pivots, pivot_rows)
        return self._echelon

    def rank(self):
        return len(self._reduced_echelon()[0])

    def rref(self):
        """Canonical reduced row echelon form as a SparseMatrix (no zero rows)."""
        pivots, rows = self._reduced_echelon()
        entries = {}
        for r, row in enumerate(rows):
            for c, v in row.items():
                entries[(r, c)] = v
        return SparseMatrix(len(rows), self.cols, entries)

    def kernel_basis(self):
        """Exact null-space basis, canonicalized from the RREF.

        For each free column f the basis vector has 1 at f and
        -RREF[r][f] at the pivot column of row r; returned as dense
        tuples of Fractions ordered by free column.
        """
        pivots, rows = self._reduced_echelon()
        pivot_set = set(pivots)
        basis = []
        for f in range(self.cols):
            if f in pivot_set:
                continue
            vec = [ZERO] * self.cols
            vec[f] = ONE
            for r, pc in enumerate(pivots):
                v = rows[r].get(f)
                if v is not None:
                    vec[pc] = -v
            basis.append(tuple(vec))
        return basis

    def solve(self, b):
        """Exact particular solution of self * x = b (free variables 0).

        b is a sequence of length ``rows``.  Raises NoSolutionError when b
        is not in the image.
        """
        if len(b) != self.rows:
            raise ValueError("rhs length mismatch")
        aug_entries = dict(self.entries)
        for r, v in enumerate(b):
            v = rat(v)
            if v != 0:
                aug_entries[(r, self.cols)] = v
        aug = SparseMatrix(self.rows, self.cols + 1, aug_entries)
        pivots, rows = aug._reduced_echelon()
        if self.cols in pivots:
            raise NoSolutionError("rhs not in image")
        x = [ZERO] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = rows[r].get(self.cols, ZERO)
        return tuple(x)

    def __repr__(self):
        return f"SparseMatrix({self.rows}x{self.cols}, nnz={len(self.entries)})"


def rank(m):
    return m.rank()


def kernel_basis(m):
    return m.kernel_basis()


def solve(m, b):
    return m.solve(b)


def cohomology_dim(d_in, d_out):
    """dim ker(d_out) - rank(d_in) for a two-step complex at one spot.

    d_in maps into the middle space, d_out maps out of it; the composite
    is re-checked to vanish exactly.
    """
    if d_in.rows != d_out.cols:
        raise ValueError("middle dimensions disagree")
    if not (d_out * d_in).is_zero():
        raise CompositionNonzeroError("d_out . d_in != 0")
    return (d_out.cols - d_out.rank()) - d_in.rank()


def span_dim(vectors, dim):
    """Dimension of the span of sparse {index: value} vectors in Q^dim."""
    if not vectors:
        return 0
    entries = {}
    for r, vec in enumerate(vectors):
        for c, v in vec.items():
            v = rat(v)
            if v != 0:
                entries[(r, c)] = v
    return SparseMatrix(len(vectors), dim, entries).rank()


def quotient_extension_basis(sub_vectors, amb_vectors, dim):
    """Indices of amb_vectors whose classes form a basis of (sub+amb)/sub.

    Both families are sparse column vectors in Q^dim.  Used to pick
    canonical representatives for subquotients.
    """
    picked = []
    base = SparseMatrix.from_columns(sub_vectors, dim).transpose() if sub_vectors \
        else SparseMatrix.zero(0, dim)
    pivots, rows = base._reduced_echelon()
    pivots = list(pivots)
    rows = list(rows)

    def reduce_against(vec):
        v = dict(vec)
        for r, pc in enumerate(pivots):
            f = v.get(pc)
            if f is None:
                continue
            for c, w in rows[r].items():
                s = v.get(c, ZERO) - f * w
                if s == 0:
                    v.pop(c, None)
                else:
                    v[c] = s
        return v

    for i, vec in enumerate(amb_vectors):
        v = reduce_against(vec)
        if not v:
            continue
        lead = min(v)
        inv = ONE / v[lead]
        v = {c: w * inv for c, w in v.items()}
        # keep stored rows reduced against the new pivot
        for r in range(len(rows)):
            f = rows[r].get(lead)
            if f is None:
                continue
            new = dict(rows[r])
            for c, w in v.items():
                s = new.get(c, ZERO) - f * w
                if s == 0:
                    new.pop(c, None)
                else:
                    new[c] = s
            rows[r] = new
        # insert keeping pivot list sorted by column for determinism
        pos = 0
        while pos < len(pivots) and pivots[pos] < lead:
            pos += 1
        pivots.insert(pos, lead)
        rows.insert(pos, v)
        picked.append(i)
    return picked
