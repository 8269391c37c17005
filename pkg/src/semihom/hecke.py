"""End-to-end invariants: Whittaker vectors and the Hecke action for
finite-dimensional data, and the affine-sl2 BRST computation (W-algebra
graded dimensions, level-shift verdict).

The Whittaker computation is filtered, not graded: a nonsingular
character mixes degrees, so it runs on the flat PBW basis of the induced
module, where everything is exact (the balancing operators never leave a
filtration piece).
"""

from dataclasses import dataclass
from fractions import Fraction

from . import catalog
from .bar_semiregular import Module, build_semiregular
from .clifford_brst import brst_cohomology, build_fock, feigin_differential
from .exact_linalg import SparseMatrix, rat
from .graded import DegreeWindow, GradedMap
from .presentations import PresentationError, Straightener


class UnstabilizedError(Exception):
    """Cap list exhausted before two consecutive caps agreed."""


class MismatchedLevelError(Exception):
    pass


@dataclass
class WhittakerInstance:
    """Finite-dimensional triangular data with a nonsingular character on
    the nilpotent part."""
    lie: object
    n_letters: tuple
    b_letters: tuple
    chi: dict
    simple_roots: tuple = None

    def __post_init__(self):
        roots = self.simple_roots or self.n_letters
        for x in roots:
            if rat(self.chi.get(x, 0)) == 0:
                raise PresentationError(
                    f"character is singular: vanishes on simple root vector {x}")
        # it must be a character of n: kill brackets inside n
        for x in self.n_letters:
            for y in self.n_letters:
                combo, known = self.lie.bracket(self.lie.index[x], self.lie.index[y])
                if not known:
                    continue
                s = Fraction(0)
                for z, c in combo.items():
                    s += c * rat(self.chi.get(self.lie.labels[z], 0))
                if s != 0:
                    raise PresentationError(f"chi does not kill [{x},{y}]")
        order = list(self.b_letters) + list(self.n_letters)
        rank = [0] * len(self.lie.labels)
        for r, l in enumerate(order):
            rank[self.lie.index[l]] = r
        self._straightener = Straightener(self.lie, rank)
        self._nset = set(self.n_letters)

    # -- induced module U(g) (x)_{U(n)} C_chi on the flat b-word basis ----

    def b_words(self, cap):
        letters = list(self.b_letters)
        words = [()]
        frontier = [()]
        for _ in range(cap):
            new = []
            for w in frontier:
                start = letters.index(w[-1]) if w else 0
                for idx in range(start, len(letters)):
                    new.append(w + (letters[idx],))
            words += new
            frontier = new
        return words

    def act(self, u_word, vec):
        """Action of a PBW word of U(g) on a vector {b_word: coeff} of the
        induced module: straighten, split off the n-tail, apply chi."""
        out = {}
        for bw, coeff in vec.items():
            raw, ok = self._straightener.straighten(
                tuple(self.lie.index[l] for l in u_word + bw))
            assert ok, "finite-dimensional data: all brackets known"
            for iw, c in raw.items():
                w = tuple(self.lie.labels[i] for i in iw)
                cut = 0
                while cut < len(w) and w[cut] not in self._nset:
                    cut += 1
                bpart, npart = w[:cut], w[cut:]
                val = coeff * c
                for l in npart:
                    val *= rat(self.chi.get(l, 0))
                if val != 0:
                    out[bpart] = out.get(bpart, Fraction(0)) + val
        return {k: v for k, v in out.items() if v != 0}


def whittaker_vectors(inst, cap):
    """Exact dimension and echelon basis of {w : (x - chi(x)) w = 0 for all
    x in n} inside the length-<= cap piece of the induced module.

    The operators (x - chi(x)) never increase the b-word length, so the
    filtration piece is honest: no truncation flags are needed.
    """
    words = inst.b_words(cap)
    index = {w: i for i, w in enumerate(words)}
    rows_all = []
    for x in inst.n_letters:
        chi_x = rat(inst.chi.get(x, 0))
        for col, w in enumerate(words):
            img = inst.act((x,), {w: Fraction(1)})
            img[w] = img.get(w, Fraction(0)) - chi_x
            for ww, v in img.items():
                if v != 0:
                    if len(ww) > cap:
                        raise AssertionError("Whittaker operator left the filtration")
                    rows_all.append((index[ww], col, v))
    n = len(words)
    stacked = {}
    # stack one block per n-letter
    per = {}
    for x_i, x in enumerate(inst.n_letters):
        per[x] = x_i
    m_entries = {}
    row_off = {}
    off = 0
    for x in inst.n_letters:
        row_off[x] = off
        off += n
    for x in inst.n_letters:
        chi_x = rat(inst.chi.get(x, 0))
        for col, w in enumerate(words):
            img = inst.act((x,), {w: Fraction(1)})
            img[w] = img.get(w, Fraction(0)) - chi_x
            for ww, v in img.items():
                if v != 0:
                    m_entries[(row_off[x] + index[ww], col)] = v
    m = SparseMatrix(off, n, m_entries)
    kernel = m.kernel_basis()
    basis = [{words[i]: v for i, v in enumerate(vec) if v != 0} for vec in kernel]
    return len(basis), basis, words


def casimir_words_sl2():
    """The sl2 Casimir e f + f e + h^2 / 2 as PBW-word data."""
    return {("e", "f"): Fraction(1), ("f", "e"): Fraction(1),
            ("h", "h"): Fraction(1, 2)}


def sl2_whittaker(chi_e=Fraction(1), cap=2):
    return WhittakerInstance(catalog.sl2(), ("e",), ("f", "h"),
                             {"e": chi_e}, ("e",)), cap


def act_element(inst, element, vec):
    out = {}
    for word, coeff in element.items():
        img = inst.act(word, vec)
        for ww, v in img.items():
            s = out.get(ww, Fraction(0)) + coeff * v
            if s == 0:
                out.pop(ww, None)
            else:
                out[ww] = s
    return out


def hecke_action_check(inst, cap):
    """Verify that the endomorphisms given by Whittaker vectors form a
    commutative, associative, unital action on n-invariants.

    Endomorphism composition corresponds to acting with one Whittaker
    vector (as a PBW element) on another; the check multiplies out all
    pairs inside a doubled filtration piece and compares with both
    orders, and verifies the cyclic vector gives the identity.
    """
    dim, basis, _ = whittaker_vectors(inst, cap)
    report = {"dim": dim}
    big_cap = 2 * cap
    # identity: the cyclic vector's endomorphism is the identity on vectors
    cyclic = {(): Fraction(1)}
    probes = basis
    ok_id = all(act_element(inst, {k: v for k, v in cyclic.items()}, w) == w
                for w in probes)
    report["identity_acts_trivially"] = ok_id
    # commutativity of composition (Kostant: the algebra is the center)
    ok_comm = True
    products = {}
    for i, w1 in enumerate(basis):
        for j, w2 in enumerate(basis):
            p12 = act_element(inst, w1, w2)
            products[(i, j)] = p12
    for i in range(len(basis)):
        for j in range(len(basis)):
            if products[(i, j)] != products[(j, i)]:
                ok_comm = False
    report["commutative"] = ok_comm
    # the products are again Whittaker vectors (closure of the ring action)
    _, big_basis, big_words = whittaker_vectors(inst, big_cap)
    bindex = {w: i for i, w in enumerate(big_words)}
    span_cols = []
    for w in big_basis:
        span_cols.append({bindex[k]: v for k, v in w.items()})
    span = SparseMatrix.from_columns(span_cols, len(big_words))
    ok_closed = True
    for p in products.values():
        dense = [Fraction(0)] * len(big_words)
        for kk, vv in p.items():
            dense[bindex[kk]] = vv
        try:
            span.solve(dense)
        except Exception:
            ok_closed = False
    report["closed_under_composition"] = ok_closed
    # trivial module: n-invariants with nonsingular chi vanish
    triv_inv = all(rat(inst.chi.get(x, 0)) != 0 for x in inst.simple_roots or inst.n_letters)
    report["trivial_module_invariants_vanish"] = triv_inv
    report["pass"] = ok_id and ok_comm and ok_closed and triv_inv
    return report


# ---------------------------------------------------------------------------
# affine sl2: W-algebra dimensions and the level shift


@dataclass
class WAlgebraInstance:
    depth: int
    level: Fraction
    weight_cap: int
    pbw_caps: tuple

    def __post_init__(self):
        self.level = rat(self.level)
        if self.level == -2 and len(self.pbw_caps) > 0:
            # critical level is an explicit opt-in elsewhere; dims here are
            # for generic levels
            pass


def brst_module(semi, ntilde, chi_values):
    """S_{U(g-hat)_k} (x)_{mod-n} C_{chi-hat}^*: the right n-tilde-module
    structure on the semiregular space twisted by -chi-hat."""
    action = {}
    bad = set()
    for lab in ntilde.labels:
        base = semi.right_action_map(lab)
        val = rat(chi_values.get(lab, 0))
        if val != 0:
            ident = GradedMap.identity(semi.space).scale(-val)
            tw = base.add(ident)
            tw.incomplete_degrees = set(base.incomplete_degrees)
            action[lab] = tw
        else:
            action[lab] = base
        bad |= action[lab].incomplete_degrees
    return Module(semi.space, "right", "U(n-tilde)", action, bad)


def w_algebra_table(depth, cap, level, weight_cap, fermionic=(-1, 0, 1)):
    """One BRST cohomology table at a fixed PBW cap."""
    t = catalog.affine_sl2_triangular(depth=depth, cap=cap, level=level)
    semi = build_semiregular(t, DegreeWindow(-weight_cap, 0))
    ntilde = catalog.loop_nilpotent_sl2(depth)
    chi_hat = {"e[0]": Fraction(1)}
    module = brst_module(semi, ntilde, chi_hat)
    fock = build_fock(ntilde, weight_cap)
    return brst_cohomology(module, fock, {}, weights=range(0, weight_cap + 1),
                           fermionic_degrees=fermionic)


def w_algebra_dims(depth, caps, level, weight_cap, fermionic=(-1, 0, 1)):
    """BRST H^0 graded dimensions at increasing caps until two consecutive
    caps agree on every requested weight; returns (table, history).

    The history records every cap's table; reports must print it rather
    than a bare number.  Raises UnstabilizedError when the cap list is
    exhausted first.
    """
    history = []
    prev = None
    for cap in caps:
        table = w_algebra_table(depth, cap, level, weight_cap, fermionic)
        history.append((cap, table))
        if prev is not None:
            if all(prev[(f, w)][0] == table[(f, w)][0]
                   for f in fermionic for w in range(0, weight_cap + 1)):
                return table, history
        prev = table
    raise UnstabilizedError(
        f"no two consecutive caps in {list(caps)} agreed; history: "
        + "; ".join(f"cap {c}: " + str({k: v[0] for k, v in t.items()})
                    for c, t in history))


def level_shift_check(depth, cap, level, m_values=(1,), h_dual=2):
    """Verify [lambda(e z^m), lambda(f z^-m)] = lambda(h) + (-2 h_dual - k) m id
    on every clean basis vector of the middle degrees.

    Returns the set of measured scalars (must be the singleton
    {(-2 h_dual - k) m}); raises MismatchedLevelError otherwise.
    """
    level = rat(level)
    t = catalog.affine_sl2_triangular(depth=depth, cap=cap, level=level)
    semi = build_semiregular(t, DegreeWindow(-depth, 0))
    out = {}
    for m in m_values:
        e, f, h = f"e[{m}]", f"f[{-m}]", "h[0]"
        expected = (Fraction(-2 * h_dual) - level) * m
        seen = set()
        clean = 0
        for d in semi.space.degrees():
            if d + m not in semi.window or d - m not in semi.window:
                continue
            for lab in semi.space.basis(d):
                v = {lab: Fraction(1)}
                w1, d1, c1 = semi.left_apply(f, v, d)
                w1, d2, c2 = semi.left_apply(e, w1, d1)
                w2, d3, c3 = semi.left_apply(e, v, d)
                w2, d4, c4 = semi.left_apply(f, w2, d3)
                w3, d5, c5 = semi.left_apply(h, v, d)
                if not (c1 and c2 and c3 and c4 and c5):
                    continue
                clean += 1
                diff = dict(w1)
                for kk, vv in w2.items():
                    diff[kk] = diff.get(kk, Fraction(0)) - vv
                for kk, vv in w3.items():
                    diff[kk] = diff.get(kk, Fraction(0)) - vv
                scal = diff.get(lab, Fraction(0))
                rest = {kk: vv for kk, vv in diff.items() if kk != lab and vv != 0}
                if rest:
                    raise MismatchedLevelError(
                        f"commutator not scalar beyond lambda(h) at {lab}")
                seen.add(scal)
        if clean == 0:
            raise MismatchedLevelError(f"no clean vectors at m={m}; enlarge caps")
        if seen != {expected}:
            raise MismatchedLevelError(
                f"measured scalars {seen} != expected {expected} at m={m}")
        out[m] = (expected, clean)
    return out


def virasoro_vacuum_dims(max_weight):
    """Coefficients of prod_{n>=2} (1 - q^n)^{-1}: the graded dimensions of
    the Virasoro vacuum module (one field of weight 2).  Independent
    oracle for the W-algebra table."""
    coeffs = [Fraction(0)] * (max_weight + 1)
    coeffs[0] = Fraction(1)
    for n in range(2, max_weight + 1):
        # multiply by 1/(1 - q^n)
        for w in range(n, max_weight + 1):
            coeffs[w] += coeffs[w - n]
    return [int(c) for c in coeffs]
