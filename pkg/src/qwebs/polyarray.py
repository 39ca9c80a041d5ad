"""Dense arrays with entries in Z[q, q^-1].

Stored coefficient-major: a map from q-exponent to an integer numpy array of
the common shape.  Products convolve over exponents.  Arithmetic runs in
int64 while a worst-case bound proves no overflow can happen, and switches
to Python-integer object arrays otherwise, so results are always exact.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .qalgebra import LaurentPoly, ZERO

_SAFE = 2**62


def _maxabs(arr: np.ndarray) -> int:
    if arr.size == 0:
        return 0
    return int(np.max(np.abs(arr)))


def _widen(arr: np.ndarray) -> np.ndarray:
    return arr.astype(object) if arr.dtype != object else arr


class PolyArray:
    """Immutable dense array of Laurent polynomials."""

    __slots__ = ("shape", "parts")

    def __init__(self, shape: Sequence[int], parts: Mapping[int, np.ndarray] | None = None):
        self.shape = tuple(int(s) for s in shape)
        clean: dict[int, np.ndarray] = {}
        for e, arr in (parts or {}).items():
            if arr.shape != self.shape:
                raise ValueError(f"part shape {arr.shape} != {self.shape}")
            if np.any(arr != 0):
                clean[int(e)] = arr
        self.parts = clean

    # -- constructors --------------------------------------------------------
    @classmethod
    def zeros(cls, shape: Sequence[int]) -> PolyArray:
        return cls(shape)

    @classmethod
    def from_entries(cls, shape: Sequence[int], entries: Mapping[tuple, LaurentPoly]) -> PolyArray:
        parts: dict[int, np.ndarray] = {}
        for idx, p in entries.items():
            for e, c in p.items():
                if e not in parts:
                    parts[e] = np.zeros(shape, dtype=np.int64)
                parts[e][idx] += c
        return cls(shape, parts)

    @classmethod
    def from_int(cls, arr) -> PolyArray:
        arr = np.asarray(arr, dtype=np.int64)
        return cls(arr.shape, {0: arr})

    @classmethod
    def diagonal(cls, exponents: Sequence[int], signs: Sequence[int] | None = None) -> PolyArray:
        """Diagonal matrix with entries sign_i * q^{exponents_i}."""
        d = len(exponents)
        signs = signs if signs is not None else [1] * d
        entries = {(i, i): LaurentPoly.monomial(e, s) for i, (e, s) in enumerate(zip(exponents, signs))}
        return cls.from_entries((d, d), entries)

    @classmethod
    def scalar(cls, p: LaurentPoly) -> PolyArray:
        return cls.from_entries((), {(): p})

    # -- basic queries ---------------------------------------------------------
    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64)) if self.shape else 1

    def is_zero(self) -> bool:
        return not self.parts

    def entry(self, idx: tuple) -> LaurentPoly:
        return LaurentPoly({e: int(arr[idx]) for e, arr in self.parts.items()})

    def nonzero_entries(self) -> dict[tuple, LaurentPoly]:
        out: dict[tuple, dict[int, int]] = {}
        for e, arr in self.parts.items():
            for idx in zip(*np.nonzero(arr)):
                idx = tuple(int(i) for i in idx)
                out.setdefault(idx, {})[e] = int(arr[idx])
        return {k: LaurentPoly(v) for k, v in out.items() if any(v.values())}

    def flat(self) -> list[LaurentPoly]:
        """All entries in C order."""
        n = self.size
        acc: list[dict[int, int]] = [dict() for _ in range(n)]
        for e, arr in self.parts.items():
            flat = arr.reshape(-1)
            for i in np.nonzero(flat)[0]:
                acc[int(i)][e] = int(flat[i])
        return [LaurentPoly(t) if t else ZERO for t in acc]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyArray):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"PolyArray(shape={self.shape}, exponents={sorted(self.parts)})"

    # -- linear structure ------------------------------------------------------
    def _combine(self, other: PolyArray, sign: int) -> PolyArray:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        parts = dict(self.parts)
        for e, arr in other.parts.items():
            if e in parts:
                a = parts[e]
                if _maxabs(a) + _maxabs(arr) >= _SAFE:
                    a, arr = _widen(a), _widen(arr)
                parts[e] = a + sign * arr
            else:
                parts[e] = sign * arr
        return PolyArray(self.shape, parts)

    def __add__(self, other: PolyArray) -> PolyArray:
        return self._combine(other, 1)

    def __sub__(self, other: PolyArray) -> PolyArray:
        return self._combine(other, -1)

    def __neg__(self) -> PolyArray:
        return PolyArray(self.shape, {e: -a for e, a in self.parts.items()})

    def scale(self, p: LaurentPoly | int) -> PolyArray:
        p = LaurentPoly.coerce(p)
        out = PolyArray(self.shape)
        for e, c in p.items():
            out = out + PolyArray(self.shape, {k + e: c * a for k, a in self.parts.items()})
        return out

    def shift(self, k: int, sign: int = 1) -> PolyArray:
        """Multiply every entry by sign * q^k."""
        return PolyArray(self.shape, {e + k: sign * a for e, a in self.parts.items()})

    # -- shape manipulation -----------------------------------------------------
    def transpose(self, perm: Sequence[int]) -> PolyArray:
        shape = tuple(self.shape[p] for p in perm)
        return PolyArray(shape, {e: np.transpose(a, perm) for e, a in self.parts.items()})

    def reshape(self, shape: Sequence[int]) -> PolyArray:
        return PolyArray(shape, {e: a.reshape(shape) for e, a in self.parts.items()})

    def take(self, axis: int, start: int, stop: int) -> PolyArray:
        sl = [slice(None)] * self.ndim
        sl[axis] = slice(start, stop)
        shape = list(self.shape)
        shape[axis] = stop - start
        return PolyArray(shape, {e: a[tuple(sl)] for e, a in self.parts.items()})

    def embed(self, shape: Sequence[int], offsets: Sequence[int]) -> PolyArray:
        """Place this array inside a zero array of ``shape`` at ``offsets``."""
        sl = tuple(slice(o, o + s) for o, s in zip(offsets, self.shape))
        parts = {}
        for e, a in self.parts.items():
            big = np.zeros(shape, dtype=a.dtype)
            big[sl] = a
            parts[e] = big
        return PolyArray(shape, parts)

    # -- products ----------------------------------------------------------------
    def tensordot(self, other: PolyArray, axes) -> PolyArray:
        if isinstance(axes, int):
            ax_a = list(range(self.ndim - axes, self.ndim))
            ax_b = list(range(axes))
        else:
            ax_a, ax_b = list(axes[0]), list(axes[1])
        for i, j in zip(ax_a, ax_b):
            if self.shape[i] != other.shape[j]:
                raise ValueError("contracted dimensions differ")
        out_shape = tuple(s for i, s in enumerate(self.shape) if i not in ax_a) + tuple(
            s for j, s in enumerate(other.shape) if j not in ax_b
        )
        if not self.parts or not other.parts:
            return PolyArray(out_shape)
        csize = 1
        for i in ax_a:
            csize *= self.shape[i]
        ma = max(_maxabs(a) for a in self.parts.values())
        mb = max(_maxabs(b) for b in other.parts.values())
        npairs = min(len(self.parts), len(other.parts))
        wide = ma * mb * max(csize, 1) * npairs >= _SAFE
        acc: dict[int, np.ndarray] = {}
        for e1, a in self.parts.items():
            if wide:
                a = _widen(a)
            for e2, b in other.parts.items():
                if wide:
                    b = _widen(b)
                t = np.tensordot(a, b, axes=(ax_a, ax_b))
                e = e1 + e2
                if e in acc:
                    acc[e] = acc[e] + t
                else:
                    acc[e] = t
        return PolyArray(out_shape, acc)

    def outer(self, other: PolyArray) -> PolyArray:
        return self.tensordot(other, 0)

    def matmul_axis(self, axis: int, mat: PolyArray) -> PolyArray:
        """Apply matrix ``mat`` (out x in) to one axis, keeping axis order."""
        t = mat.tensordot(self, ([1], [axis]))
        perm = list(range(1, axis + 1)) + [0] + list(range(axis + 1, self.ndim))
        return t.transpose(perm)

    def trace_axes(self, i: int, j: int, mat: PolyArray | None = None) -> PolyArray:
        """Contract axes i and j (i < j) against ``mat`` (identity if None)."""
        d = self.shape[i]
        if mat is None:
            mat = PolyArray.from_int(np.eye(d, dtype=np.int64))
        return self.tensordot(mat, ([i, j], [0, 1]))


def stack_flat(arrays: Iterable[PolyArray]) -> list[list[LaurentPoly]]:
    return [a.flat() for a in arrays]
