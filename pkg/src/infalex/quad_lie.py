"""Quadratic graded Lie algebras L(V)/ideal(R) with R inside wedge^2 V.

Graded pieces are computed as quotients inside the free Lie algebra: the
degree-q piece of the ideal is spanned by ad_{e_k} applied to the piece one
degree down, starting from R in degree 2.  The brute-force route to the
infinitesimal Alexander invariant (``bb_direct``) quotients the degree q+2
piece by all brackets of two elements of degree >= 2; it exists as the
independent oracle for the presentation-matrix route in ``alex_module``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .exact_linalg import EchelonBasis, RationalMatrix, Vec, echelon_basis
from .free_lie import (GradedDims, LieElement, _lyndon_words_cached,
                       ad_generator_matrix, basis_bracket, lyndon_index)

Pair = tuple[int, int]


def wedge2_pairs(n: int) -> list[Pair]:
    return list(combinations(range(n), 2))


def wedge2_index(n: int) -> dict[Pair, int]:
    return {p: i for i, p in enumerate(wedge2_pairs(n))}


def _normalize_relation(n: int, rel: dict) -> Vec:
    """Relation vector keyed by wedge-pair index, entries exact."""
    idx = wedge2_index(n)
    out: Vec = {}
    for key, c in rel.items():
        i, j = key
        c = Fraction(c) if not isinstance(c, Fraction) else c
        if not c:
            continue
        if i == j:
            raise ValueError("wedge pair with equal indices")
        if i > j:
            i, j, c = j, i, -c
        k = idx[(i, j)]
        out[k] = out.get(k, Fraction(0)) + c
        if not out[k]:
            del out[k]
    return out


@dataclass(frozen=True)
class LiePresentation:
    """Generator space dimension plus an echelonized basis of R in wedge^2 V."""

    dim_v: int
    relations: tuple[Vec, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @staticmethod
    def make(dim_v: int, relations) -> "LiePresentation":
        if dim_v < 1:
            raise ValueError("dim_v >= 1 required")
        eb = echelon_basis(_normalize_relation(dim_v, r) for r in relations)
        return LiePresentation(dim_v, tuple(eb.vectors()))

    @staticmethod
    def from_json(doc) -> "LiePresentation":
        """Document shape: {"dim_v": n, "relations": [[{"i":..,"j":..,"c":"p/q"},..],..]}."""
        if isinstance(doc, (str, bytes)):
            doc = json.loads(doc)
        rels = []
        for terms in doc.get("relations", []):
            rel: dict[Pair, Fraction] = {}
            for t in terms:
                key = (int(t["i"]), int(t["j"]))
                rel[key] = rel.get(key, Fraction(0)) + Fraction(str(t["c"]))
            rels.append(rel)
        return LiePresentation.make(int(doc["dim_v"]), rels)

    def num_relations(self) -> int:
        return len(self.relations)

    # relation vectors as degree-2 Lie elements: pair (i,j) -> Lyndon word (i,j)
    def relation_elements(self) -> list[LieElement]:
        pairs = wedge2_pairs(self.dim_v)
        return [LieElement.make(2, {pairs[k]: c for k, c in rel.items()})
                for rel in self.relations]


# ---------------------------------------------------------------------------
# graded pieces of the ideal and of the quotient
# ---------------------------------------------------------------------------

def _ideal_echelon(p: LiePresentation, q: int) -> EchelonBasis:
    """Echelonized span of ideal(R)_q in Lyndon coordinates of L_q, cached."""
    key = ("ideal", q)
    cached = p._cache.get(key)
    if cached is not None:
        return cached
    n = p.dim_v
    if q < 2:
        raise ValueError("the ideal lives in degrees >= 2")
    if q == 2:
        # wedge^2 V and L_2 share the (i<j) basis order
        eb = echelon_basis(p.relations)
    else:
        prev = _ideal_echelon(p, q - 1)
        ads = [ad_generator_matrix(n, i, q - 1) for i in range(n)]
        eb = EchelonBasis()
        for v in prev.vectors():
            for m in ads:
                eb.add(m.matvec(v))
    p._cache[key] = eb
    return eb


def ideal_piece(p: LiePresentation, q: int) -> RationalMatrix:
    """Columns spanning ideal(R)_q inside L_q(V), echelonized and deterministic."""
    eb = _ideal_echelon(p, q)
    rows = len(_lyndon_words_cached(p.dim_v, q))
    return RationalMatrix.from_columns(eb.vectors(), rows)


def graded_dims(p: LiePresentation, max_degree: int) -> GradedDims:
    dims = [p.dim_v]
    for q in range(2, max_degree + 1):
        free_dim = len(_lyndon_words_cached(p.dim_v, q))
        dims.append(free_dim - _ideal_echelon(p, q).rank)
    return GradedDims(1, tuple(dims[:max_degree]))


def quotient_basis_words(p: LiePresentation, q: int) -> list[tuple[int, ...]]:
    """Lyndon words of length q whose classes form a basis of the quotient."""
    eb = _ideal_echelon(p, q)
    leads = set(eb.rows)
    words = _lyndon_words_cached(p.dim_v, q)
    return [w for i, w in enumerate(words) if i not in leads]


@dataclass(frozen=True)
class GradedPiece:
    """One graded piece of the quotient: lifts of a basis plus the ideal span."""

    degree: int
    basis_lift: tuple[LieElement, ...]
    ideal_subspace: RationalMatrix

    @property
    def dimension(self) -> int:
        return len(self.basis_lift)


def graded_piece(p: LiePresentation, q: int) -> GradedPiece:
    if q < 2:
        if q != 1:
            raise ValueError("degrees start at 1")
        gens = tuple(LieElement.generator(i) for i in range(p.dim_v))
        return GradedPiece(1, gens, RationalMatrix.zeros(p.dim_v, 0))
    lifts = tuple(LieElement.make(q, {w: 1}) for w in quotient_basis_words(p, q))
    return GradedPiece(q, lifts, ideal_piece(p, q))


def beta_matrix(p: LiePresentation) -> RationalMatrix:
    """The surjection wedge^2 V -> G_2 = wedge^2 V / R, kernel exactly R.

    Rows are indexed by the pair basis classes that survive (non-pivot
    columns of the echelonized R), so the matrix reads off canonical quotient
    coordinates.
    """
    n = p.dim_v
    total = len(wedge2_pairs(n))
    eb = echelon_basis(p.relations)
    leads = eb.leads()
    free = [k for k in range(total) if k not in set(leads)]
    pos = {k: r for r, k in enumerate(free)}
    entries = {}
    for k in range(total):
        red = eb.reduce({k: Fraction(1)})
        for c_idx, c in red.items():
            entries[(pos[c_idx], k)] = c
    return RationalMatrix(len(free), total, entries)


# ---------------------------------------------------------------------------
# brute-force infinitesimal Alexander invariant
# ---------------------------------------------------------------------------

def bb_direct(p: LiePresentation, q: int) -> tuple[int, list[tuple[int, ...]]]:
    """dim of the degree-q piece of G'_ab (degrees shifted by 2), with a basis.

    Works in L_{q+2}: quotient by ideal(R)_{q+2} together with all brackets
    [L_a, L_b] for a, b >= 2, a + b = q + 2.  Every element of L_a lifts some
    class of the quotient algebra, so no explicit section is needed.  Returns
    the dimension and the Lyndon words indexing a basis of the quotient.
    """
    if q < 0:
        raise ValueError("q >= 0 required")
    n = p.dim_v
    d = q + 2
    key = ("bb", q)
    cached = p._cache.get(key)
    if cached is not None:
        return cached
    span = EchelonBasis()
    if d >= 2:
        for v in _ideal_echelon(p, d).vectors():
            span.add(v)
    idx = lyndon_index(n, d)
    for a in range(2, d - 1):
        b = d - a
        if b < 2 or b < a:
            continue
        words_a = _lyndon_words_cached(n, a)
        words_b = _lyndon_words_cached(n, b)
        for i, wa in enumerate(words_a):
            for j, wb in enumerate(words_b):
                if a == b and j <= i:
                    continue
                res = basis_bracket(wa, wb)
                if res.is_zero():
                    continue
                span.add({idx[w]: c for w, c in res.coords})
    free_dim = len(_lyndon_words_cached(n, d))
    dim = free_dim - span.rank
    leads = set(span.rows)
    words = _lyndon_words_cached(n, d)
    basis = [w for i, w in enumerate(words) if i not in leads]
    result = (dim, basis)
    p._cache[key] = result
    return result
