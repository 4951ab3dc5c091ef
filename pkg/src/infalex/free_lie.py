"""The free graded Lie algebra L(V) on n generators, realized in the Lyndon basis.

A Lyndon word is a word strictly smaller than all of its proper cyclic
rotations.  The basis element attached to a Lyndon word w of length >= 2 is
the bracket [b(u), b(v)] of the standard factorization w = uv, where v is
the longest proper Lyndon suffix of w.  Expansions in the tensor algebra are
triangular with respect to lexicographic order (b(w) = w + larger words),
which is what makes rewriting into the basis a finite elimination.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact_linalg import ONE, RationalMatrix, Vec

Word = tuple[int, ...]


# ---------------------------------------------------------------------------
# Lyndon words
# ---------------------------------------------------------------------------

def is_lyndon(w: Word) -> bool:
    if not w:
        return False
    n = len(w)
    return all(w < w[i:] + w[:i] for i in range(1, n))


def lyndon_words(n: int, q: int) -> list[Word]:
    """All Lyndon words of length exactly q on the alphabet {0..n-1}, sorted."""
    if n < 1 or q < 1:
        raise ValueError("need n >= 1 and q >= 1")
    # Duval's generation of Lyndon words of length <= q, in lex order
    out: list[Word] = []
    w = [-1]
    while w:
        w[-1] += 1
        m = len(w)
        if m == q:
            out.append(tuple(w))
        while len(w) < q:
            w.append(w[-m])
        while w and w[-1] == n - 1:
            w.pop()
    return out


@lru_cache(maxsize=None)
def _lyndon_words_cached(n: int, q: int) -> tuple[Word, ...]:
    return tuple(lyndon_words(n, q))


def lyndon_index(n: int, q: int) -> dict[Word, int]:
    return {w: i for i, w in enumerate(_lyndon_words_cached(n, q))}


def _mobius(d: int) -> int:
    mu, p = 1, 2
    while p * p <= d:
        if d % p == 0:
            d //= p
            if d % p == 0:
                return 0
            mu = -mu
        p += 1
    if d > 1:
        mu = -mu
    return mu


@dataclass(frozen=True)
class GradedDims:
    """Dimension table indexed by degree, starting at first_degree."""

    first_degree: int
    dims: tuple[int, ...]

    def __getitem__(self, degree: int) -> int:
        i = degree - self.first_degree
        if not (0 <= i < len(self.dims)):
            raise IndexError(f"degree {degree} outside table")
        return self.dims[i]

    def degrees(self) -> range:
        return range(self.first_degree, self.first_degree + len(self.dims))


def witt_dims(n: int, max_degree: int) -> GradedDims:
    """Necklace counts: dim L_q = (1/q) sum_{d|q} mu(d) n^(q/d)."""
    dims = []
    for q in range(1, max_degree + 1):
        total = sum(_mobius(d) * n ** (q // d) for d in range(1, q + 1) if q % d == 0)
        dims.append(total // q)
    return GradedDims(1, tuple(dims))


# ---------------------------------------------------------------------------
# standard bracketing and tensor expansion
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> tuple[Word, Word]:
    """w = uv with v the longest proper Lyndon suffix; both factors are Lyndon."""
    if len(w) < 2:
        raise ValueError("factorization needs length >= 2")
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise AssertionError(f"{w} is not Lyndon")


@lru_cache(maxsize=None)
def tensor_expansion(w: Word) -> dict[Word, int]:
    """Expansion of the standard bracketing b(w) in the tensor algebra.

    The lexicographically smallest word of the expansion is w itself, with
    coefficient 1.
    """
    if len(w) == 1:
        return {w: 1}
    u, v = standard_factorization(w)
    eu, ev = tensor_expansion(u), tensor_expansion(v)
    out: dict[Word, int] = {}
    for a, ca in eu.items():
        for b, cb in ev.items():
            for word, sign in ((a + b, 1), (b + a, -1)):
                c = out.get(word, 0) + sign * ca * cb
                if c:
                    out[word] = c
                else:
                    out.pop(word, None)
    return out


def _rewrite_to_lyndon(tensor: dict[Word, Fraction]) -> dict[Word, Fraction]:
    """Rewrite a Lie element given in the tensor algebra into the Lyndon basis.

    Processes words in increasing lex order; each subtraction only introduces
    larger words, so a heap with lazy deletion terminates.
    """
    work = dict(tensor)
    heap = list(work)
    heapq.heapify(heap)
    out: dict[Word, Fraction] = {}
    while heap:
        w = heapq.heappop(heap)
        c = work.get(w)
        if not c:
            continue
        if not is_lyndon(w):
            raise ValueError(f"not a Lie element: stray word {w}")
        out[w] = c
        for word, coeff in tensor_expansion(w).items():
            cur = work.get(word)
            nv = (cur if cur is not None else 0) - c * coeff
            if nv:
                if cur is None:
                    heapq.heappush(heap, word)
                work[word] = nv
            elif cur is not None:
                del work[word]
    return out


# ---------------------------------------------------------------------------
# Lie elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LieElement:
    """Homogeneous element of L(V), sparse in the Lyndon basis of its degree."""

    degree: int
    coords: tuple[tuple[Word, Fraction], ...]  # sorted by word, no zeros

    @staticmethod
    def make(degree: int, coords: dict) -> "LieElement":
        items = []
        for w, c in coords.items():
            c = Fraction(c) if not isinstance(c, Fraction) else c
            if not c:
                continue
            if len(w) != degree or not is_lyndon(tuple(w)):
                raise ValueError(f"{w} is not a Lyndon word of length {degree}")
            items.append((tuple(w), c))
        return LieElement(degree, tuple(sorted(items)))

    @staticmethod
    def generator(i: int) -> "LieElement":
        return LieElement(1, (((i,), ONE),))

    @staticmethod
    def zero(degree: int) -> "LieElement":
        return LieElement(degree, ())

    def as_dict(self) -> dict[Word, Fraction]:
        return dict(self.coords)

    def is_zero(self) -> bool:
        return not self.coords

    def __add__(self, other: "LieElement") -> "LieElement":
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        d = self.as_dict()
        for w, c in other.coords:
            nv = d.get(w, Fraction(0)) + c
            if nv:
                d[w] = nv
            else:
                d.pop(w, None)
        return LieElement(self.degree, tuple(sorted(d.items())))

    def scale(self, c) -> "LieElement":
        c = Fraction(c) if not isinstance(c, Fraction) else c
        if not c:
            return LieElement.zero(self.degree)
        return LieElement(self.degree, tuple((w, c * x) for w, x in self.coords))

    def __sub__(self, other: "LieElement") -> "LieElement":
        return self + other.scale(-1)

    def to_vec(self, n: int) -> Vec:
        """Coordinates against lyndon_words(n, degree), as a sparse vector."""
        idx = lyndon_index(n, self.degree)
        return {idx[w]: c for w, c in self.coords}


def bracket(x: LieElement, y: LieElement) -> LieElement:
    """[x, y], expanded back into the Lyndon basis."""
    if x.is_zero() or y.is_zero():
        return LieElement.zero(x.degree + y.degree)
    tensor: dict[Word, Fraction] = {}
    for wx, cx in x.coords:
        ex = tensor_expansion(wx)
        for wy, cy in y.coords:
            ey = tensor_expansion(wy)
            c0 = cx * cy
            for a, ca in ex.items():
                for b, cb in ey.items():
                    for word, sign in ((a + b, 1), (b + a, -1)):
                        nv = tensor.get(word, Fraction(0)) + sign * c0 * ca * cb
                        if nv:
                            tensor[word] = nv
                        else:
                            tensor.pop(word, None)
    return LieElement(x.degree + y.degree, tuple(sorted(_rewrite_to_lyndon(tensor).items())))


@lru_cache(maxsize=None)
def _basis_bracket(u: Word, v: Word) -> tuple[tuple[Word, Fraction], ...]:
    """[b(u), b(v)] in the Lyndon basis, cached on the word pair."""
    res = bracket(LieElement(len(u), ((u, ONE),)), LieElement(len(v), ((v, ONE),)))
    return res.coords


def basis_bracket(u: Word, v: Word) -> LieElement:
    return LieElement(len(u) + len(v), _basis_bracket(u, v))


@lru_cache(maxsize=None)
def ad_generator_matrix(n: int, i: int, q: int) -> RationalMatrix:
    """Matrix of ad_{e_i}: L_q -> L_{q+1} in the Lyndon bases."""
    src = _lyndon_words_cached(n, q)
    tgt_idx = lyndon_index(n, q + 1)
    entries = {}
    for j, w in enumerate(src):
        for word, c in _basis_bracket((i,), w):
            entries[(tgt_idx[word], j)] = c
    return RationalMatrix(len(tgt_idx), len(src), entries)


def ad_matrix(v, q: int) -> RationalMatrix:
    """Matrix of ad_v: L_q -> L_{q+1} for v given by coordinates in V."""
    n = len(v)
    if q < 1:
        raise ValueError("q >= 1 required")
    rows = len(_lyndon_words_cached(n, q + 1))
    cols = len(_lyndon_words_cached(n, q))
    out = RationalMatrix.zeros(rows, cols)
    for i, c in enumerate(v):
        c = Fraction(c) if not isinstance(c, Fraction) else c
        if c:
            out = out + ad_generator_matrix(n, i, q).scale(c)
    return out
