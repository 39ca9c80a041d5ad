"""Representation-theoretic oracle for U_q(sl_n) webs.

Everything is built from scratch in the Gel'fand-Tsetlin basis: fundamental
irreps V_a^n (basis = a-subsets of {1..n}, subsets containing n first), the
generators, the intertwiners tau, d, v_out, v_in and the (co)pairings.  Webs
are evaluated as invariant vectors in Hom(empty, word) and glued by the
pivotal caps, so no picture is ever consulted beyond the flow labels.

A factor of a word is ``(a, dual)``: ``(a, False)`` is V_a, ``(a, True)`` is
its dual.  Words are read left to right along the top boundary, which is
clockwise around the web.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .polyarray import PolyArray
from .qalgebra import LaurentPoly, ONE, ZERO, qbinom, qpow

Factor = tuple[int, bool]
Word = tuple[Factor, ...]

DEFAULT_BUDGET = 10**5


class BudgetExceeded(RuntimeError):
    """Raised when a contraction would exceed the entry budget."""


# ---------------------------------------------------------------------------
# irreps


@lru_cache(maxsize=None)
def gt_basis(n: int, a: int) -> tuple[frozenset, ...]:
    """a-subsets of {1..n}: the i_{-1} block (containing n) first, recursively."""
    if a < 0 or a > n:
        raise ValueError(f"no fundamental irrep V_{a} at level {n}")
    if n == 0:
        return (frozenset(),)
    out: list[frozenset] = []
    if a >= 1:
        out += [s | {n} for s in gt_basis(n - 1, a - 1)]
    if a <= n - 1:
        out += list(gt_basis(n - 1, a))
    return tuple(out)


def dim(n: int, a: int) -> int:
    return comb(n, a) if 0 <= a <= n else 0


def block_offset(n: int, a: int) -> int:
    """Index where the i_0 block starts inside V_a^n."""
    return dim(n - 1, a - 1)


@dataclass(frozen=True)
class Irrep:
    n: int
    a: int
    basis: tuple[frozenset, ...]
    E: tuple[np.ndarray, ...]  # X_i^+, i = 1..n-1 stored at i-1
    F: tuple[np.ndarray, ...]  # X_i^-
    Kexp: tuple[np.ndarray, ...]  # K_i = diag(q^Kexp)

    @property
    def dim(self) -> int:
        return len(self.basis)


@lru_cache(maxsize=None)
def build_irrep(n: int, a: int) -> Irrep:
    basis = gt_basis(n, a)
    index = {s: i for i, s in enumerate(basis)}
    d = len(basis)
    Es, Fs, Ks = [], [], []
    for i in range(1, n):
        E = np.zeros((d, d), dtype=np.int64)
        F = np.zeros((d, d), dtype=np.int64)
        K = np.zeros(d, dtype=np.int64)
        for s, col in index.items():
            K[col] = (i + 1 in s) - (i in s)
            if i in s and i + 1 not in s:
                E[index[(s - {i}) | {i + 1}], col] = 1
            if i + 1 in s and i not in s:
                F[index[(s - {i + 1}) | {i}], col] = 1
        Es.append(E)
        Fs.append(F)
        Ks.append(K)
    return Irrep(n, a, basis, tuple(Es), tuple(Fs), tuple(Ks))


@lru_cache(maxsize=None)
def generator(n: int, a: int, dual: bool, gen: str, i: int) -> PolyArray:
    """Matrix of a generator on V_a^n or its dual.

    ``gen`` is one of "E" (X_i^+), "F" (X_i^-), "K", "Kinv".  Duals act by
    rho*(Z) = rho(S(Z))^T with S(K) = K^-1, S(X^+) = -X^+ K^-1, S(X^-) = -K X^-.
    """
    rep = build_irrep(n, a)
    kexp = rep.Kexp[i - 1]
    d = rep.dim
    if gen in ("K", "Kinv"):
        sign = 1 if (gen == "K") != dual else -1
        return PolyArray.diagonal([sign * int(e) for e in kexp])
    mat = rep.E[i - 1] if gen == "E" else rep.F[i - 1]
    if not dual:
        return PolyArray.from_int(mat)
    entries = {}
    for row, col in zip(*np.nonzero(mat)):
        # dual entry sits at (col, row)
        e = -int(kexp[col]) if gen == "E" else int(kexp[row])
        entries[(int(col), int(row))] = qpow(e, -1)
    return PolyArray.from_entries((d, d), entries)


def identity(d: int) -> PolyArray:
    return PolyArray.from_int(np.eye(d, dtype=np.int64))


def word_dims(n: int, word: Word) -> tuple[int, ...]:
    return tuple(dim(n, a) for a, _ in word)


def apply_generator(n: int, word: Word, t: PolyArray, gen: str, i: int,
                    offset: int = 0, right: bool = False) -> PolyArray:
    """Coproduct action of a generator on the axes offset..offset+len(word).

    With ``right=True`` computes t composed with the action (matrices
    transposed), for use on the source side of a morphism.
    """

    def mat(f: Factor, g: str) -> PolyArray:
        m = generator(n, f[0], f[1], g, i)
        return m.transpose([1, 0]) if right else m

    m = len(word)
    if gen in ("K", "Kinv"):
        out = t
        for j, f in enumerate(word):
            out = out.matmul_axis(offset + j, mat(f, gen))
        return out
    total = PolyArray(t.shape)
    for j in range(m):
        term = t.matmul_axis(offset + j, mat(word[j], gen))
        if gen == "E":
            others = range(j + 1, m)
            og = "K"
        else:
            others = range(j)
            og = "Kinv"
        for jj in others:
            term = term.matmul_axis(offset + jj, mat(word[jj], og))
        total = total + term
    return total


# ---------------------------------------------------------------------------
# equivariant tensors


@dataclass(frozen=True)
class EquivariantTensor:
    """A morphism source -> target at level n; axes are target then source."""

    n: int
    target: Word
    source: Word
    data: PolyArray = field(compare=False)

    def __post_init__(self):
        want = word_dims(self.n, self.target) + word_dims(self.n, self.source)
        if self.data.shape != want:
            raise ValueError(f"data shape {self.data.shape} does not match words {want}")

    def is_zero(self) -> bool:
        return self.data.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, EquivariantTensor):
            return NotImplemented
        return (self.n, self.target, self.source) == (other.n, other.target, other.source) and self.data == other.data

    def __add__(self, other: EquivariantTensor) -> EquivariantTensor:
        self._check_same(other)
        return EquivariantTensor(self.n, self.target, self.source, self.data + other.data)

    def __sub__(self, other: EquivariantTensor) -> EquivariantTensor:
        self._check_same(other)
        return EquivariantTensor(self.n, self.target, self.source, self.data - other.data)

    def __neg__(self) -> EquivariantTensor:
        return EquivariantTensor(self.n, self.target, self.source, -self.data)

    def scale(self, p: LaurentPoly) -> EquivariantTensor:
        return EquivariantTensor(self.n, self.target, self.source, self.data.scale(p))

    def _check_same(self, other: EquivariantTensor) -> None:
        if (self.n, self.target, self.source) != (other.n, other.target, other.source):
            raise ValueError("tensors live in different Hom spaces")

    def is_equivariant(self) -> bool:
        nt = len(self.target)
        for i in range(1, self.n):
            for g in ("E", "F", "K"):
                lhs = apply_generator(self.n, self.target, self.data, g, i)
                rhs = apply_generator(self.n, self.source, self.data, g, i, offset=nt, right=True)
                if lhs != rhs:
                    return False
        return True

    def compose(self, other: EquivariantTensor) -> EquivariantTensor:
        """self o other."""
        if self.source != other.target or self.n != other.n:
            raise ValueError("cannot compose: source/target mismatch")
        k = len(self.source)
        nt = len(self.target)
        data = self.data.tensordot(other.data, (list(range(nt, nt + k)), list(range(k))))
        return EquivariantTensor(self.n, self.target, other.source, data)

    def tensor(self, other: EquivariantTensor) -> EquivariantTensor:
        if self.n != other.n:
            raise ValueError("level mismatch")
        data = self.data.outer(other.data)
        nt, ns = len(self.target), len(self.source)
        mt = len(other.target)
        perm = (list(range(nt)) + list(range(nt + ns, nt + ns + mt))
                + list(range(nt, nt + ns)) + list(range(nt + ns + mt, data.ndim)))
        return EquivariantTensor(self.n, self.target + other.target, self.source + other.source,
                                 data.transpose(perm))


def id_tensor(n: int, f: Factor) -> EquivariantTensor:
    return EquivariantTensor(n, (f,), (f,), identity(dim(n, f[0])))


def vector(n: int, word: Word, data: PolyArray) -> EquivariantTensor:
    return EquivariantTensor(n, tuple(word), (), data)


# ---------------------------------------------------------------------------
# tau, d, trivalent vertices


@lru_cache(maxsize=None)
def tau_exponents(n: int, a: int) -> tuple[int, ...]:
    rep = build_irrep(n, a)
    tot = np.zeros(rep.dim, dtype=np.int64)
    for j in range(1, n):
        tot += j * (n - j) * rep.Kexp[j - 1]
    return tuple(int(x) for x in tot)


def tau(n: int, a: int, dual: bool = False) -> EquivariantTensor:
    """tau_n = prod_j K_j^{j(n-j)} acting on V_a^n (or its dual)."""
    ex = tau_exponents(n, a)
    if dual:
        ex = tuple(-e for e in ex)
    f = (a, dual)
    return EquivariantTensor(n, (f,), (f,), PolyArray.diagonal(ex))


@lru_cache(maxsize=None)
def _d_entries(n: int, a: int) -> dict:
    """Sparse matrix of d_{a,n}: V_a^n -> (V_{n-a}^n)^*, keyed (row, col)."""
    if a == 0 or a == n:
        return {(0, 0): ONE}
    out: dict = {}
    src_off = block_offset(n, a)
    tgt_off = block_offset(n, n - a)
    # i_0 d_{a-1,n-1} p_{-1}
    for (r, c), v in _d_entries(n - 1, a - 1).items():
        out[(tgt_off + r, c)] = v
    # (-q)^{-a} i_{-1} d_{a,n-1} p_0
    coef = qpow(-a, (-1) ** a)
    for (r, c), v in _d_entries(n - 1, a).items():
        out[(r, src_off + c)] = coef * v
    return out


def d_map(n: int, a: int) -> EquivariantTensor:
    """d_{a,n}: V_a -> V_{n-a}^*."""
    ent = _d_entries(n, a)
    data = PolyArray.from_entries((dim(n, n - a), dim(n, a)), ent)
    return EquivariantTensor(n, ((n - a, True),), ((a, False),), data)


def d_inverse(n: int, a: int) -> EquivariantTensor:
    """d_{a,n}^{-1}: V_{n-a}^* -> V_a (d is a monomial matrix)."""
    ent = {}
    for (r, c), v in _d_entries(n, a).items():
        ent[(c, r)] = v ** -1
    data = PolyArray.from_entries((dim(n, a), dim(n, n - a)), ent)
    return EquivariantTensor(n, ((a, False),), ((n - a, True),), data)


def _valid(level: int, *labels: int) -> bool:
    return all(0 <= x <= level for x in labels)


@lru_cache(maxsize=None)
def _vout_entries(n: int, a: int, b: int, c: int) -> dict:
    if n == 0:
        return {(0, 0, 0): ONE}
    out: dict = {}

    def add(key, val):
        out[key] = out.get(key, ZERO) + val

    m = n - 1
    oa, ob, oc = block_offset(n, a), block_offset(n, b), block_offset(n, c)
    if _valid(m, a - 1, b, c):
        coef = qpow(b + c, (-1) ** c)
        for (x, y, z), v in _vout_entries(m, a - 1, b, c).items():
            add((x, ob + y, oc + z), coef * v)
    if _valid(m, a, b - 1, c):
        coef = qpow(c, (-1) ** a)
        for (x, y, z), v in _vout_entries(m, a, b - 1, c).items():
            add((oa + x, y, oc + z), coef * v)
    if _valid(m, a, b, c - 1):
        coef = qpow(0, (-1) ** b)
        for (x, y, z), v in _vout_entries(m, a, b, c - 1).items():
            add((oa + x, ob + y, z), coef * v)
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _vin_entries(n: int, a: int, b: int, c: int) -> dict:
    if n == 0:
        return {(0, 0, 0): ONE}
    out: dict = {}

    def add(key, val):
        out[key] = out.get(key, ZERO) + val

    m = n - 1
    oa, ob, oc = block_offset(n, a), block_offset(n, b), block_offset(n, c)
    if _valid(m, a - 1, b, c):
        coef = qpow(0, (-1) ** c)
        for (x, y, z), v in _vin_entries(m, a - 1, b, c).items():
            add((x, ob + y, oc + z), coef * v)
    if _valid(m, a, b - 1, c):
        coef = qpow(-a, (-1) ** a)
        for (x, y, z), v in _vin_entries(m, a, b - 1, c).items():
            add((oa + x, y, oc + z), coef * v)
    if _valid(m, a, b, c - 1):
        coef = qpow(-a - b, (-1) ** b)
        for (x, y, z), v in _vin_entries(m, a, b, c - 1).items():
            add((oa + x, ob + y, z), coef * v)
    return {k: v for k, v in out.items() if v}


def _check_triple(n: int, a: int, b: int, c: int) -> None:
    if a + b + c != n or not _valid(n, a, b, c):
        raise ValueError(f"vertex labels ({a},{b},{c}) must be in [0,{n}] and sum to {n}")


def vout(n: int, a: int, b: int, c: int) -> EquivariantTensor:
    """v_out: 1 -> V_a (x) V_b (x) V_c."""
    _check_triple(n, a, b, c)
    data = PolyArray.from_entries((dim(n, a), dim(n, b), dim(n, c)), _vout_entries(n, a, b, c))
    return EquivariantTensor(n, ((a, False), (b, False), (c, False)), (), data)


def vin(n: int, a: int, b: int, c: int) -> EquivariantTensor:
    """v_in: V_a (x) V_b (x) V_c -> 1."""
    _check_triple(n, a, b, c)
    data = PolyArray.from_entries((dim(n, a), dim(n, b), dim(n, c)), _vin_entries(n, a, b, c))
    return EquivariantTensor(n, (), ((a, False), (b, False), (c, False)), data)


# ---------------------------------------------------------------------------
# pivotal structure


def _tau_diag(n: int, f: Factor, power: int) -> PolyArray:
    ex = tau_exponents(n, f[0])
    sign = -1 if f[1] else 1
    return PolyArray.diagonal([sign * power * e for e in ex])


def cap_matrix(n: int, f: Factor) -> PolyArray:
    """Matrix of the cap f (x) f^* -> 1.

    For f = V_a this is p_{a*} o (tau (x) id); for f = V_a^* it is p_a.
    """
    d = dim(n, f[0])
    if f[1]:
        return identity(d)
    return _tau_diag(n, f, 1)


def cup_matrix(n: int, f: Factor) -> PolyArray:
    """Matrix of the cup 1 -> f (x) f^*.

    For f = V_a this is c_a; for f = V_a^* it is (id (x) tau^-1) o c_{a*}.
    """
    d = dim(n, f[0])
    if not f[1]:
        return identity(d)
    return _tau_diag(n, (f[0], False), -1)


def dual_of(f: Factor) -> Factor:
    return (f[0], not f[1])


def pairing(n: int, a: int, dualside: str = "left") -> EquivariantTensor:
    """Evaluation maps: left = p_a: V_a^* (x) V_a -> 1; right = p_{a*} o (tau (x) id)."""
    if dualside == "left":
        src = ((a, True), (a, False))
        return EquivariantTensor(n, (), src, cap_matrix(n, (a, True)))
    src = ((a, False), (a, True))
    return EquivariantTensor(n, (), src, cap_matrix(n, (a, False)))


def copairing(n: int, a: int, dualside: str = "right") -> EquivariantTensor:
    """Coevaluations: right = c_a: 1 -> V_a (x) V_a^*; left = (id (x) tau^-1) o c_{a*}."""
    if dualside == "right":
        return EquivariantTensor(n, ((a, False), (a, True)), (), cup_matrix(n, (a, False)))
    return EquivariantTensor(n, ((a, True), (a, False)), (), cup_matrix(n, (a, True)))


def rotate(t: EquivariantTensor) -> EquivariantTensor:
    """Pivotal rotation of an invariant vector: the last leg moves to the front."""
    if t.source:
        raise ValueError("rotate acts on invariant vectors")
    m = len(t.target)
    f = t.target[-1]
    data = t.data.transpose([m - 1] + list(range(m - 1)))
    data = data.matmul_axis(0, _tau_diag(t.n, f, 1))
    return vector(t.n, (f,) + t.target[:-1], data)


def glue(u: EquivariantTensor, w: EquivariantTensor, budget: int = DEFAULT_BUDGET) -> EquivariantTensor:
    """Join the last leg of u to the first leg of w with a cap."""
    f, g = u.target[-1], w.target[0]
    if g != dual_of(f) and not (f[0] == g[0] == 0):
        raise ValueError(f"cannot glue {f} to {g}")
    out_word = u.target[:-1] + w.target[1:]
    size = int(np.prod(word_dims(u.n, out_word), dtype=np.int64)) if out_word else 1
    if size > budget:
        raise BudgetExceeded(f"contraction would create {size} entries (budget {budget})")
    left = u.data.tensordot(cap_matrix(u.n, f), ([u.data.ndim - 1], [0]))
    data = left.tensordot(w.data, ([left.ndim - 1], [0]))
    return vector(u.n, out_word, data)


def self_cap(t: EquivariantTensor, i: int) -> EquivariantTensor:
    """Cap legs i and i+1 of an invariant vector."""
    f = t.target[i]
    data = t.data.tensordot(cap_matrix(t.n, f), ([i, i + 1], [0, 1]))
    return vector(t.n, t.target[:i] + t.target[i + 2:], data)


def close_ring(t: EquivariantTensor) -> EquivariantTensor:
    """Cap the last leg (routed under the diagram) with the first leg."""
    return self_cap(rotate(t), 0)


def as_vector(m: EquivariantTensor) -> EquivariantTensor:
    """Bend every source leg up on the right (plain cups), reversing order."""
    data = m.data
    nt, ns = len(m.target), len(m.source)
    # (f (x) id)(id_src (x) cups): source leg s pairs with a new dual leg.
    # With plain cups on V (and tau^-1 cups on duals) the bent leg carries
    # the source index directly for V and tau^-1-weighted for duals.
    perm = list(range(nt)) + list(range(nt + ns - 1, nt - 1, -1))
    data = data.transpose(perm)
    word = m.target + tuple(dual_of(f) for f in reversed(m.source))
    for j, f in enumerate(reversed(m.source)):
        if f[1]:
            data = data.matmul_axis(nt + j, _tau_diag(m.n, (f[0], False), -1))
    return vector(m.n, word, data)


def glue_close(u: EquivariantTensor, w: EquivariantTensor, budget: int = DEFAULT_BUDGET) -> EquivariantTensor:
    """Attach w between the last and the first leg of u, closing a ring.

    Equivalent to ``close_ring(glue(u, w))`` but never materialises the
    intermediate with both dangling ring edges.
    """
    f_last, f_first = u.target[-1], u.target[0]
    g_first, g_last = w.target[0], w.target[-1]
    for x, y in ((f_last, g_first), (g_last, f_first)):
        if y != dual_of(x) and not (x[0] == y[0] == 0):
            raise ValueError(f"cannot glue {x} to {y}")
    out_word = u.target[1:-1] + w.target[1:-1]
    size = int(np.prod(word_dims(u.n, out_word), dtype=np.int64)) if out_word else 1
    if size > budget:
        raise BudgetExceeded(f"contraction would create {size} entries (budget {budget})")
    n = u.n
    # rotation of w's last leg to the front contributes tau^{+-1}; then cap.
    closing = _tau_diag(n, g_last, 1).tensordot(cap_matrix(n, g_last), 1)
    left = u.data.tensordot(cap_matrix(n, f_last), ([u.data.ndim - 1], [0]))
    right = w.data.tensordot(closing, ([w.data.ndim - 1], [0]))
    # left: (first, L..., e'), right: (e', M..., first')
    nl, nr = left.ndim, right.ndim
    data = left.tensordot(right, ([nl - 1, 0], [0, nr - 1]))
    return vector(n, out_word, data)


# ---------------------------------------------------------------------------
# flow vertices and polygon evaluation
#
# Calibration: merges are d^-1 applied to v_in with no extra unit, splits are
# d applied to v_out times (-1)^{(n+1)(a+b)}.  This is the unique choice among
# the four sign combinations that makes bigons, P=Q identities, the n=3
# square, the n=4 hexagon relation and I=H hold simultaneously.


def apply_leg(t: EquivariantTensor, i: int, m: EquivariantTensor) -> EquivariantTensor:
    """Apply a one-leg morphism m to leg i of the invariant vector t."""
    if t.target[i] != m.source[0]:
        raise ValueError(f"leg {i} is {t.target[i]}, morphism expects {m.source[0]}")
    word = list(t.target)
    word[i] = m.target[0]
    return vector(t.n, tuple(word), t.data.matmul_axis(i, m.data))


def normalize_zero_legs(t: EquivariantTensor) -> EquivariantTensor:
    """V_0 and its dual are the same one-dimensional object; use (0, False)."""
    word = tuple((0, False) if f[0] == 0 else f for f in t.target)
    return EquivariantTensor(t.n, word, t.source, t.data)


def merge_vec(n: int, a: int, b: int) -> EquivariantTensor:
    """Merge vertex as an invariant vector on (a+b, b*, a*)."""
    t = apply_leg(as_vector(vin(n, a, b, n - a - b)), 0, d_inverse(n, a + b))
    return normalize_zero_legs(t)


def split_vec(n: int, a: int, b: int) -> EquivariantTensor:
    """Split vertex as an invariant vector on (a, b, (a+b)*)."""
    t = apply_leg(vout(n, a, b, n - a - b), 2, d_map(n, n - a - b))
    if (n + 1) * (a + b) % 2:
        t = -t
    return normalize_zero_legs(t)


def as_morphism(v: EquivariantTensor, nsource: int) -> EquivariantTensor:
    """Bend the last ``nsource`` legs of an invariant vector down to the source (inverse of as_vector)."""
    nt = len(v.target) - nsource
    data = v.data
    for j in range(nsource):
        f = v.target[nt + j]
        if not f[1] and f[0]:
            data = data.matmul_axis(nt + j, _tau_diag(v.n, f, 1))
    perm = list(range(nt)) + list(range(v.data.ndim - 1, nt - 1, -1))
    source = tuple(dual_of(f) if f[0] else f for f in reversed(v.target[nt:]))
    return EquivariantTensor(v.n, v.target[:nt], source, data.transpose(perm))


def flow_vertex(kind: str, n: int, a: int, b: int) -> EquivariantTensor:
    """merge: V_a (x) V_b -> V_{a+b}; split: V_{a+b} -> V_a (x) V_b."""
    if not (0 <= a and 0 <= b and a + b <= n):
        raise ValueError(f"labels {a}, {b} do not fit at level {n}")
    if kind == "merge":
        return as_morphism(merge_vec(n, a, b), 2)
    if kind == "split":
        return as_morphism(split_vec(n, a, b), 1)
    raise ValueError(f"unknown vertex kind {kind!r}")


def vertex_from_regions(n: int, regions: Sequence[int]) -> EquivariantTensor:
    """Trivalent vertex whose three faces, clockwise, carry the given flows.

    Legs are listed clockwise starting from the edge between the first and
    second face.
    """
    for s in range(3):
        r0, r1, r2 = regions[s], regions[(s + 1) % 3], regions[(s + 2) % 3]
        if r0 >= r1 >= r2:
            t = split_vec(n, r0 - r1, r1 - r2)
        elif r1 <= r2 <= r0:
            t = merge_vec(n, r0 - r2, r2 - r1)
        else:
            continue
        for _ in range(s):
            t = rotate(t)
        return t
    raise ValueError(f"flows {tuple(regions)} do not form a vertex")


def ring(n: int, regions: Sequence[int], l: int, budget: int = DEFAULT_BUDGET) -> EquivariantTensor:
    """Polygon with inner flow l and outer flows ``regions`` (closed cyclically)."""
    m = len(regions) - 1
    vs = [vertex_from_regions(n, (l, regions[p - 1], regions[p])) for p in range(1, m + 1)]
    if m == 1:
        return normalize_zero_legs(close_ring(vs[0]))
    t = vs[0]
    for v in vs[1:-1]:
        t = glue(t, v, budget)
    return normalize_zero_legs(glue_close(t, vs[-1], budget))


def boundary_word(boundary) -> Word:
    """Tensor word of a boundary signature: '+' is V, '-' is V^*."""
    return tuple((lab, o == "-") if lab else (0, False) for lab, o in boundary)


def circle(n: int, l: int) -> LaurentPoly:
    """Closed loop labelled l: cap after cup."""
    t = pairing(n, l, "right").compose(copairing(n, l, "right"))
    return t.data.entry(())


def scalar_tensor(n: int, p: LaurentPoly) -> EquivariantTensor:
    return vector(n, (), PolyArray.scalar(p))


def rep_web(w, budget: int = DEFAULT_BUDGET) -> EquivariantTensor:
    """Invariant vector of a polygon web (P or Q family)."""
    from .polygons import ZERO_WEB

    if w is ZERO_WEB:
        raise ValueError("ZERO has no boundary; use rep_websum on an empty sum")
    f = w.flows
    if f.k == 0:
        if w.family == "P":
            return scalar_tensor(w.n, circle(w.n, w.l))
        return scalar_tensor(w.n, ONE)
    t = ring(w.n, f.regions(), w.l, budget)
    want = boundary_word(w.boundary)
    if t.target != want:
        raise AssertionError(f"ring word {t.target} != boundary {want}")
    return t


def zero_tensor(n: int, word: Word) -> EquivariantTensor:
    return vector(n, word, PolyArray.zeros(word_dims(n, word)))


def rep_websum(x, budget: int = DEFAULT_BUDGET) -> EquivariantTensor:
    total = zero_tensor(x.n, boundary_word(x.boundary))
    for w, c in x.items():
        total = total + rep_web(w, budget).scale(c)
    return total


def is_zero(t: EquivariantTensor) -> bool:
    return t.is_zero()


def strand(n: int, f: Factor) -> EquivariantTensor:
    """A single strand as an invariant vector on (f, f^*)."""
    word = (f, dual_of(f)) if f[0] else ((0, False), (0, False))
    return vector(n, word, cup_matrix(n, f))


def bigon(n: int, k: int, l: int) -> EquivariantTensor:
    """The bigon P^n_{(0),(k)}{l} as an invariant vector on (k^*, k)."""
    return ring(n, [0, k, 0], l)


def i_tree(n: int, a: int, b: int, c: int) -> EquivariantTensor:
    """Merge a, b first, then c: a vector on (a+b+c, c*, b*, a*)."""
    return glue(merge_vec(n, a + b, c), merge_vec(n, a, b))


def h_tree(n: int, a: int, b: int, c: int) -> EquivariantTensor:
    """Merge b, c first, then a: a vector on (a+b+c, c*, b*, a*)."""
    t = glue(rotate(merge_vec(n, a, b + c)), merge_vec(n, b, c))
    for _ in range(3):
        t = rotate(t)
    return t


def crossing(n: int) -> EquivariantTensor:
    """Positive crossing on V_1 (x) V_1: q^{n-1} Id - q^n p."""
    if n < 2:
        raise ValueError("crossing needs n >= 2")
    vo = vout(n, n - 2, 1, 1)  # 1 -> V_{n-2} (x) V_1 (x) V_1
    vi = vin(n, 1, 1, n - 2)  # V_1 (x) V_1 (x) V_{n-2} -> 1
    p = vi.data.tensordot(vo.data, ([2], [0]))  # (i, j, x, y)
    p = p.transpose([2, 3, 0, 1])
    d = dim(n, 1)
    ident = identity(d).outer(identity(d)).transpose([0, 2, 1, 3])
    data = ident.shift(n - 1) - p.shift(n)
    word = ((1, False), (1, False))
    return EquivariantTensor(n, word, word, data)


def braid_relation_holds(n: int) -> bool:
    r = crossing(n)
    one = id_tensor(n, (1, False))
    r1, r2 = r.tensor(one), one.tensor(r)
    return r1.compose(r2).compose(r1) == r2.compose(r1).compose(r2)


# ---------------------------------------------------------------------------
# Gel'fand-Tsetlin projection and the commuting square


def gt_block(t: EquivariantTensor, key_blocks: Sequence[int]) -> EquivariantTensor:
    """Restrict every leg of an invariant vector to one branching block.

    ``key_blocks[i]`` is -1 (label drops by one) or 0 (label kept).
    """
    n = t.n
    data = t.data
    word = []
    for i, (f, blk) in enumerate(zip(t.target, key_blocks)):
        a, dual = f
        off = block_offset(n, a) if a > 0 else 0
        if blk == -1:
            if a == 0:
                return None
            data = data.take(i, 0, off)
            na = a - 1
        else:
            data = data.take(i, off, dim(n, a))
            na = a
        word.append((na, dual) if na else (0, False))
    return vector(n - 1, tuple(word), data)


def gt_project(t: EquivariantTensor) -> dict[tuple[int, ...], EquivariantTensor]:
    """All nonempty GT blocks of an invariant vector, keyed by per-leg block choice."""
    from itertools import product

    out = {}
    for blocks in product((-1, 0), repeat=len(t.target)):
        b = gt_block(t, blocks)
        if b is None or 0 in b.data.shape:
            continue
        out[blocks] = b
    return out


@dataclass
class SquareReport:
    web: str
    entries_checked: int
    mismatches: list
    unit: LaurentPoly | None

    @property
    def passed(self) -> bool:
        return not self.mismatches


def _unit_between(x: EquivariantTensor, y: EquivariantTensor):
    """The monomial u with x == u * y, or None."""
    ex, ey = x.data.nonzero_entries(), y.data.nonzero_entries()
    if set(ex) != set(ey):
        return None
    if not ex:
        return ONE
    idx = next(iter(ex))
    px, py = ex[idx], ey[idx]
    cx, cy = px.coeff(px.min_exp), py.coeff(py.min_exp)
    if cx not in (cy, -cy):
        return None
    u = LaurentPoly.monomial(px.min_exp - py.min_exp, 1 if cx == cy else -1)
    return u if y.scale(u) == x else None


def commuting_square_check(w, budget: int = DEFAULT_BUDGET) -> SquareReport:
    """Compare the GT blocks of Rep_n(w) with Rep_{n-1}(dGT(w))."""
    from .branching import dgt
    from .polygons import WebSum, point_of_position

    x = WebSum.single(w)
    k = w.flows.k
    top = rep_web(w, budget)
    image = dgt(x)
    mismatches = []
    unit = None
    checked = 0
    for blocks, block in gt_project(top).items():
        s = [point_of_position(k, pos) for pos, b in enumerate(blocks) if b == -1]
        lower = image[s]
        if any(lab > w.n - 1 for lab, _ in lower.boundary):
            continue
        expect = rep_websum(lower, budget)
        checked += 1
        if expect.target != block.target:
            mismatches.append((tuple(sorted(s)), "word"))
            continue
        u = _unit_between(block, expect)
        if u is None or (unit is not None and u != unit):
            mismatches.append((tuple(sorted(s)), "value"))
            continue
        if not block.is_zero():
            unit = u
    return SquareReport(str(w), checked, mismatches, unit)


# ---------------------------------------------------------------------------
# kernels


def flatten(t: EquivariantTensor) -> list[LaurentPoly]:
    return t.data.flat()


def kernel_of_columns(columns: Sequence[Sequence[LaurentPoly]]) -> tuple[int, list[list[LaurentPoly]]]:
    """Exact (rank, kernel basis) of the matrix with the given columns.

    Rows are first thinned to an independent set found at q = 2; the exact
    kernel of that submatrix is then verified on every row, falling back to
    the full matrix if verification fails.
    """
    from fractions import Fraction

    from .qalgebra import clear_denominators, eval_at, nullspace

    m = len(columns)
    if m == 0:
        return 0, []
    nrows = len(columns[0])
    rows = [[columns[j][i] for j in range(m)] for i in range(nrows)]
    rows = [r for r in rows if any(not x.is_zero() for x in r)]
    chosen, basis = [], []
    for r in rows:
        v = [eval_at(x, Fraction(2)) for x in r]
        for piv, bv in basis:
            if v[piv]:
                f = v[piv] / bv[piv]
                v = [x - f * y for x, y in zip(v, bv)]
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is not None:
            basis.append((nz, v))
            chosen.append(r)
        if len(chosen) == m:
            break

    def kernel_from(sub):
        if not sub:
            return [[ONE if i == j else ZERO for i in range(m)] for j in range(m)]
        cols = [[sub[i][j] for i in range(len(sub))] for j in range(m)]
        return [clear_denominators(v) for v in nullspace(cols)]

    def kills(vecs):
        for v in vecs:
            for r in rows:
                acc = ZERO
                for x, c in zip(r, v):
                    acc = acc + x * c
                if not acc.is_zero():
                    return False
        return True

    ker = kernel_from(chosen)
    if not kills(ker):
        ker = kernel_from(rows)
    return m - len(ker), ker


def kernel_rank(n: int, flows, families: Sequence[str] = ("P", "Q"), budget: int = DEFAULT_BUDGET):
    """Rank of Rep on the span of the admissible polygon webs and a kernel basis.

    Returns (rank, webs, kernel) where each kernel vector lists coefficients
    against ``webs`` (distinct representatives, P before Q).
    """
    from .polygons import admissible_webs, representative

    webs = []
    for fam in families:
        for w in admissible_webs(fam, n, flows):
            r = representative(w)
            if r not in webs:
                webs.append(r)
    dims = word_dims(n, boundary_word(webs[0].boundary)) if webs else ()
    size = int(np.prod(dims, dtype=np.int64)) if dims else 1
    if size > budget:
        raise BudgetExceeded(f"boundary has {size} entries (budget {budget})")
    cols = [flatten(rep_web(w, budget)) for w in webs]
    rk, ker = kernel_of_columns(cols)
    return rk, webs, ker


# ---------------------------------------------------------------------------
# structural invariants of the oracle


def _mm(x: PolyArray, y: PolyArray) -> PolyArray:
    return x.tensordot(y, ([1], [0]))


def hopf_relations_hold(n: int, a: int, dual: bool = False) -> bool:
    """K X K^-1 = q^{+-c_ij} X, (q - q^-1)[E_i, F_j] = delta_ij (K - K^-1), Serre."""
    d = dim(n, a)
    g = {(x, i): generator(n, a, dual, x, i) for x in ("E", "F", "K", "Kinv") for i in range(1, n)}
    one = identity(d)
    for i in range(1, n):
        if _mm(g["K", i], g["Kinv", i]) != one:
            return False
        for j in range(1, n):
            c = 2 if i == j else (-1 if abs(i - j) == 1 else 0)
            for x, s in (("E", 1), ("F", -1)):
                lhs = _mm(_mm(g["K", i], g[x, j]), g["Kinv", i])
                if lhs != g[x, j].shift(s * c):
                    return False
            comm = _mm(g["E", i], g["F", j]) - _mm(g["F", j], g["E", i])
            want = g["K", i] - g["Kinv", i] if i == j else PolyArray.zeros((d, d))
            if comm.shift(1) - comm.shift(-1) != want:
                return False
            for x in ("E", "F"):
                xi, xj = g[x, i], g[x, j]
                if abs(i - j) > 1 and _mm(xi, xj) != _mm(xj, xi):
                    return False
                if abs(i - j) == 1:
                    xii = _mm(xi, xi)
                    serre = _mm(xii, xj) + _mm(xj, xii) - (_mm(_mm(xi, xj), xi).scale(qbinom(2, 1)))
                    if not serre.is_zero():
                        return False
    return True


def double_dual_holds(n: int, a: int) -> bool:
    """rho**(Z) = tau rho(Z) tau^-1, with rho**(Z) = rho*(S(Z))^T."""
    t, ti = _tau_diag(n, (a, False), 1), _tau_diag(n, (a, False), -1)
    for i in range(1, n):
        e, f = generator(n, a, True, "E", i), generator(n, a, True, "F", i)
        k, kinv = generator(n, a, True, "K", i), generator(n, a, True, "Kinv", i)
        dd = {
            "E": (-_mm(e, kinv)).transpose([1, 0]),
            "F": (-_mm(k, f)).transpose([1, 0]),
            "K": kinv.transpose([1, 0]),
        }
        for x, m in dd.items():
            if m != _mm(_mm(t, generator(n, a, False, x, i)), ti):
                return False
    return True


def tau_branching_holds(n: int, a: int) -> bool:
    """tau_n = q^{n-a} i_{-1} tau_{n-1} p_{-1} + q^{-a} i_0 tau_{n-1} p_0."""
    if n < 1:
        return True
    want = []
    if a >= 1:
        want += [n - a + e for e in tau_exponents(n - 1, a - 1)]
    if a <= n - 1:
        want += [-a + e for e in tau_exponents(n - 1, a)]
    return list(tau_exponents(n, a)) == want


def k_product_exponents(n: int, a: int) -> tuple[int, ...]:
    """Exponents of prod_j K_j^j on V_a^n."""
    rep = build_irrep(n, a)
    tot = np.zeros(rep.dim, dtype=np.int64)
    for j in range(1, n):
        tot += j * rep.Kexp[j - 1]
    return tuple(int(x) for x in tot)


def d_dual_sign_law_holds(n: int, a: int) -> bool:
    """d_{a,n}^* o tau = (-1)^{(n+1)a} d_{n-a,n} as maps V_{n-a} -> V_a^*."""
    dstar = d_map(n, a).data.transpose([1, 0])
    lhs = _mm(dstar, _tau_diag(n, (n - a, False), 1))
    return lhs == d_map(n, n - a).data.scale((-1) ** ((n + 1) * a))


def zigzag_holds(n: int, a: int) -> bool:
    """All four snake identities for the (co)pairings on V_a and V_a^*."""
    v, vs = id_tensor(n, (a, False)), id_tensor(n, (a, True))
    pl, pr = pairing(n, a, "left"), pairing(n, a, "right")
    cl, cr = copairing(n, a, "left"), copairing(n, a, "right")
    checks = [
        (v.tensor(pl)).compose(cr.tensor(v)) == v,
        (pl.tensor(vs)).compose(vs.tensor(cr)) == vs,
        (pr.tensor(v)).compose(v.tensor(cl)) == v,
        (vs.tensor(pr)).compose(cl.tensor(vs)) == vs,
    ]
    return all(checks)
