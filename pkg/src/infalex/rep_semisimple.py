"""Rational representation theory of sp(2g) and sl(n), by explicit matrices.

Irreducibles are realized concretely: the defining module, wedge and
symmetric powers, tensor products, and the fundamental symplectic modules
wedge^k H / (theta ^ wedge^(k-2) H).  Basis vectors are weight vectors
throughout (weights in the coordinates of Fulton-Harris), so weight spaces
are index sets and everything Casimir-related block-diagonalizes over
weights.

Casimir normalization: dual bases with respect to the trace form of the
defining representation.  The eigenvalue on the irreducible of highest
weight lambda is then <lambda, lambda + 2 rho> for the induced form on
weights (coefficient 1/2 per coordinate for sp, the trace-zero-corrected
Euclidean form for sl).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement

from .errors import AmbiguousDecompositionError
from .exact_linalg import ONE, RationalMatrix, Vec, echelon_basis

ColMat = tuple  # tuple of {row: Fraction} dicts, one per column


def act_vec(cols: ColMat, v: Vec) -> Vec:
    out: Vec = {}
    for j, c in v.items():
        for r, x in cols[j].items():
            cur = out.get(r)
            nv = c * x if cur is None else cur + c * x
            if nv:
                out[r] = nv
            elif cur is not None:
                del out[r]
    return out


def _cols_to_matrix(cols: ColMat, dim: int) -> RationalMatrix:
    entries = {}
    for j, col in enumerate(cols):
        for i, v in col.items():
            entries[(i, j)] = v
    return RationalMatrix(dim, dim, entries)


# ---------------------------------------------------------------------------
# the two algebra families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HighestWeight:
    """Coefficients n_i of lambda = sum n_i lambda_i over the fundamental weights."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.coefficients):
            raise ValueError("fundamental coefficients must be non-negative")


@dataclass(frozen=True)
class LieAlgebraSpec:
    family: str  # 'sp' (type C_g) or 'sl' (type A_{n-1})
    rank: int    # g, respectively n

    def __post_init__(self):
        if self.family not in ("sp", "sl"):
            raise ValueError("family must be 'sp' or 'sl'")
        if self.family == "sp" and self.rank < 1:
            raise ValueError("sp rank must be >= 1")
        if self.family == "sl" and self.rank < 2:
            raise ValueError("sl needs n >= 2")

    @property
    def defining_dim(self) -> int:
        return 2 * self.rank if self.family == "sp" else self.rank

    @property
    def weight_length(self) -> int:
        return self.rank if self.family == "sp" else self.rank

    @property
    def num_fundamental(self) -> int:
        return self.rank if self.family == "sp" else self.rank - 1

    # -- structure data -------------------------------------------------------

    def algebra_basis(self) -> list[tuple[str, ColMat]]:
        return list(_algebra_basis(self))

    def raising_labels(self) -> list[str]:
        if self.family == "sp":
            g = self.rank
            labels = [f"X_{i}_{i+1}" for i in range(g - 1)]
            labels.append(f"U_{g-1}")
            return labels
        n = self.rank
        return [f"E_{i}_{i+1}" for i in range(n - 1)]

    def lowering_labels(self) -> list[str]:
        if self.family == "sp":
            g = self.rank
            labels = [f"X_{i+1}_{i}" for i in range(g - 1)]
            labels.append(f"V_{g-1}")
            return labels
        n = self.rank
        return [f"E_{i+1}_{i}" for i in range(n - 1)]

    def simple_coroot_pairing(self, w: tuple[int, ...], i: int) -> int:
        """<w, alpha_i^vee> for the i-th simple root (0-based)."""
        if self.family == "sp":
            g = self.rank
            if i < g - 1:
                return w[i] - w[i + 1]
            return w[g - 1]
        return w[i] - w[i + 1]

    def fundamental_from_weight(self, w: tuple[int, ...]) -> HighestWeight:
        return HighestWeight(tuple(self.simple_coroot_pairing(w, i)
                                   for i in range(self.num_fundamental)))

    def partition_from_fundamental(self, hw: HighestWeight) -> tuple[int, ...]:
        """Weight in the epsilon coordinates (a partition m_1 >= m_2 >= ...)."""
        n_i = hw.coefficients
        if len(n_i) != self.num_fundamental:
            raise ValueError("wrong number of fundamental coefficients")
        length = self.weight_length
        m = []
        for i in range(length):
            m.append(sum(n_i[k] for k in range(i, len(n_i))))
        return tuple(m)

    def rho(self) -> tuple[int, ...]:
        if self.family == "sp":
            g = self.rank
            return tuple(g - i for i in range(g))
        n = self.rank
        return tuple(n - 1 - i for i in range(n))

    def weight_form(self, a, b) -> Fraction:
        """Form on weights induced by the trace form of the defining rep."""
        if self.family == "sp":
            return Fraction(sum(x * y for x, y in zip(a, b)), 2)
        n = self.rank
        dot = sum(x * y for x, y in zip(a, b))
        return Fraction(dot) - Fraction(sum(a) * sum(b), n)

    def defining_weights(self) -> tuple[tuple[int, ...], ...]:
        if self.family == "sp":
            g = self.rank
            eps = [tuple(1 if t == i else 0 for t in range(g)) for i in range(g)]
            return tuple(eps + [tuple(-x for x in e) for e in eps])
        n = self.rank
        return tuple(tuple(1 if t == i else 0 for t in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def _algebra_basis(spec: LieAlgebraSpec) -> tuple[tuple[str, ColMat], ...]:
    d = spec.defining_dim

    def from_terms(terms):
        cols = [dict() for _ in range(d)]
        for (i, j, c) in terms:  # c * E_ij
            cols[j][i] = cols[j].get(i, Fraction(0)) + Fraction(c)
        return tuple({r: v for r, v in col.items() if v} for col in cols)

    out: list[tuple[str, ColMat]] = []
    if spec.family == "sp":
        g = spec.rank
        for i in range(g):
            out.append((f"H_{i}", from_terms([(i, i, 1), (g + i, g + i, -1)])))
        for i in range(g):
            for j in range(g):
                if i != j:
                    out.append((f"X_{i}_{j}", from_terms([(i, j, 1), (g + j, g + i, -1)])))
        for i in range(g):
            for j in range(i + 1, g):
                out.append((f"Y_{i}_{j}", from_terms([(i, g + j, 1), (j, g + i, 1)])))
        for i in range(g):
            out.append((f"U_{i}", from_terms([(i, g + i, 1)])))
        for i in range(g):
            for j in range(i + 1, g):
                out.append((f"Z_{i}_{j}", from_terms([(g + i, j, 1), (g + j, i, 1)])))
        for i in range(g):
            out.append((f"V_{i}", from_terms([(g + i, i, 1)])))
    else:
        n = spec.rank
        for i in range(n - 1):
            out.append((f"H_{i}", from_terms([(i, i, 1), (i + 1, i + 1, -1)])))
        for i in range(n):
            for j in range(n):
                if i != j:
                    out.append((f"E_{i}_{j}", from_terms([(i, j, 1)])))
    return tuple(out)


def _trace_product(a: ColMat, b: ColMat) -> Fraction:
    total = Fraction(0)
    for j, col in enumerate(b):
        for i, v in col.items():
            x = a[i].get(j)
            if x:
                total += x * v
    return total


@lru_cache(maxsize=None)
def _dual_coefficients(spec: LieAlgebraSpec) -> tuple[tuple[Fraction, ...], ...]:
    """Inverse Gram matrix of the algebra basis under the defining trace form."""
    basis = _algebra_basis(spec)
    n = len(basis)
    gram = [[_trace_product(basis[a][1], basis[b][1]) for b in range(n)] for a in range(n)]
    # dense Gauss-Jordan
    aug = [gram[i] + [ONE if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c])
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


# ---------------------------------------------------------------------------
# weight modules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightModule:
    """A rational representation carried by explicit exact matrices.

    ``actions`` covers the full basis of the acting algebra; basis vectors are
    weight vectors, with weights recorded in epsilon coordinates.
    """

    algebra: LieAlgebraSpec
    dimension: int
    weights: tuple[tuple[int, ...], ...]
    actions: dict  # label -> ColMat

    def action_matrix(self, label: str) -> RationalMatrix:
        return _cols_to_matrix(self.actions[label], self.dimension)

    def weight_decomposition(self) -> dict[tuple[int, ...], list[int]]:
        out: dict[tuple[int, ...], list[int]] = {}
        for i, w in enumerate(self.weights):
            out.setdefault(w, []).append(i)
        return out


def defining_module(spec: LieAlgebraSpec) -> WeightModule:
    actions = {label: cols for label, cols in _algebra_basis(spec)}
    return WeightModule(spec, spec.defining_dim, spec.defining_weights(), actions)


def _wedge_sign_and_target(combo: tuple[int, ...], slot: int, j: int):
    """Replace combo[slot] by j inside a sorted wedge monomial; None if it dies."""
    if j in combo and j != combo[slot]:
        return None
    rest = combo[:slot] + combo[slot + 1:]
    inversions = sum(1 for s, c in enumerate(rest)
                     if (c > j and s < slot) or (c < j and s >= slot))
    new = tuple(sorted(rest + (j,)))
    sign = ONE if inversions % 2 == 0 else -ONE
    return sign, new


def wedge_power(m: WeightModule, k: int) -> WeightModule:
    combos = list(combinations(range(m.dimension), k))
    index = {c: i for i, c in enumerate(combos)}
    weights = tuple(tuple(sum(m.weights[i][t] for i in c) for t in range(len(m.weights[0])))
                    for c in combos)
    actions = {}
    for label, cols in m.actions.items():
        new_cols = []
        for combo in combos:
            col: Vec = {}
            for slot, i in enumerate(combo):
                for j, v in cols[i].items():
                    st = _wedge_sign_and_target(combo, slot, j)
                    if st is None:
                        continue
                    sign, new = st
                    r = index[new]
                    cur = col.get(r)
                    nv = sign * v if cur is None else cur + sign * v
                    if nv:
                        col[r] = nv
                    elif cur is not None:
                        del col[r]
            new_cols.append(col)
        actions[label] = tuple(new_cols)
    return WeightModule(m.algebra, len(combos), weights, actions)


def sym_power(m: WeightModule, k: int) -> WeightModule:
    monos = sorted(tuple(sorted(c)) for c in combinations_with_replacement(range(m.dimension), k))
    expts = []
    for mono in monos:
        e = [0] * m.dimension
        for i in mono:
            e[i] += 1
        expts.append(tuple(e))
    index = {e: i for i, e in enumerate(expts)}
    weights = tuple(tuple(sum(e[i] * m.weights[i][t] for i in range(m.dimension))
                          for t in range(len(m.weights[0]))) for e in expts)
    actions = {}
    for label, cols in m.actions.items():
        new_cols = []
        for e in expts:
            col: Vec = {}
            for i, mult in enumerate(e):
                if not mult:
                    continue
                for j, v in cols[i].items():
                    tgt = list(e)
                    tgt[i] -= 1
                    tgt[j] += 1
                    r = index[tuple(tgt)]
                    c = mult * v
                    cur = col.get(r)
                    nv = c if cur is None else cur + c
                    if nv:
                        col[r] = nv
                    elif cur is not None:
                        del col[r]
            new_cols.append(col)
        actions[label] = tuple(new_cols)
    return WeightModule(m.algebra, len(expts), weights, actions)


def tensor_product(a: WeightModule, b: WeightModule) -> WeightModule:
    if a.algebra != b.algebra:
        raise ValueError("mismatched algebras")
    dim = a.dimension * b.dimension
    weights = tuple(tuple(x + y for x, y in zip(a.weights[i], b.weights[j]))
                    for i in range(a.dimension) for j in range(b.dimension))
    actions = {}
    for label in a.actions:
        ca, cb = a.actions[label], b.actions[label]
        new_cols = []
        for i in range(a.dimension):
            for j in range(b.dimension):
                col: Vec = {}
                for r, v in ca[i].items():
                    col[r * b.dimension + j] = v
                for r, v in cb[j].items():
                    key = i * b.dimension + r
                    cur = col.get(key)
                    nv = v if cur is None else cur + v
                    if nv:
                        col[key] = nv
                    elif cur is not None:
                        del col[key]
                new_cols.append(col)
        actions[label] = tuple(new_cols)
    return WeightModule(a.algebra, dim, weights, actions)


def quotient_module(m: WeightModule, spanning: list[Vec]) -> WeightModule:
    """Quotient by an invariant subspace given by spanning vectors.

    The surviving basis is the set of ambient basis vectors at non-pivot
    positions of the echelonized span; invariance is verified.
    """
    eb = echelon_basis(spanning)
    for v in eb.vectors():
        for label, cols in m.actions.items():
            if eb.reduce(act_vec(cols, v)):
                raise ValueError(f"subspace not invariant under {label}")
    leads = set(eb.rows)
    kept = [i for i in range(m.dimension) if i not in leads]
    pos = {i: t for t, i in enumerate(kept)}
    weights = tuple(m.weights[i] for i in kept)
    actions = {}
    for label, cols in m.actions.items():
        new_cols = []
        for i in kept:
            red = eb.reduce(cols[i])
            new_cols.append({pos[r]: v for r, v in red.items()})
        actions[label] = tuple(new_cols)
    return WeightModule(m.algebra, len(kept), weights, actions)


def fundamental_module(spec: LieAlgebraSpec, k: int) -> WeightModule:
    """V(lambda_k): for sp, wedge^k H modulo theta ^ wedge^(k-2) H; for sl, wedge^k."""
    if spec.family == "sp":
        g = spec.rank
        if not (1 <= k <= g):
            raise ValueError(f"k must be in 1..{g}")
        H = defining_module(spec)
        if k == 1:
            return H
        W = wedge_power(H, k)
        index = {c: i for i, c in enumerate(combinations(range(2 * g), k))}
        spanning = []
        for rest in combinations(range(2 * g), k - 2):
            vec: Vec = {}
            for i in range(g):
                pair = (i, g + i)
                if pair[0] in rest or pair[1] in rest:
                    continue
                merged = tuple(sorted(rest + pair))
                # sign of sorting (i, g+i, rest...) - count inversions of the
                # concatenation pair + rest
                seq = list(pair) + list(rest)
                inv = sum(1 for s in range(len(seq)) for t in range(s + 1, len(seq))
                          if seq[s] > seq[t])
                sign = ONE if inv % 2 == 0 else -ONE
                cur = vec.get(index[merged])
                nv = sign if cur is None else cur + sign
                if nv:
                    vec[index[merged]] = nv
                elif cur is not None:
                    del vec[index[merged]]
            if vec:
                spanning.append(vec)
        return quotient_module(W, spanning)
    n = spec.rank
    if not (1 <= k <= n - 1):
        raise ValueError(f"k must be in 1..{n - 1}")
    return wedge_power(defining_module(spec), k)


# ---------------------------------------------------------------------------
# Weyl dimension formula and Casimir eigenvalues
# ---------------------------------------------------------------------------

def weyl_dim(spec: LieAlgebraSpec, hw: HighestWeight) -> int:
    m = spec.partition_from_fundamental(hw)
    if spec.family == "sp":
        g = spec.rank
        l = [m[i] + (g - i) for i in range(g)]
        r = [g - i for i in range(g)]
        num, den = 1, 1
        for i in range(g):
            for j in range(i + 1, g):
                num *= l[i] ** 2 - l[j] ** 2
                den *= r[i] ** 2 - r[j] ** 2
            num *= l[i]
            den *= r[i]
        q, rem = divmod(num, den)
        if rem:
            raise ArithmeticError("Weyl dimension is not integral")
        return q
    n = spec.rank
    l = [m[i] + (n - 1 - i) for i in range(n)]
    num, den = 1, 1
    for i in range(n):
        for j in range(i + 1, n):
            num *= l[i] - l[j]
            den *= j - i
    q, rem = divmod(num, den)
    if rem:
        raise ArithmeticError("Weyl dimension is not integral")
    return q


def casimir_eigenvalue(spec: LieAlgebraSpec, hw: HighestWeight) -> Fraction:
    lam = spec.partition_from_fundamental(hw)
    rho = spec.rho()
    shifted = tuple(x + 2 * r for x, r in zip(lam, rho))
    return spec.weight_form(lam, shifted)


def chen_module_weight(n: int, q: int) -> HighestWeight:
    """The sl_n highest weight q*lambda_1 + lambda_2 (lambda_2 read as 0 when n = 2)."""
    if n < 2:
        raise ValueError("n >= 2 required")
    if n == 2:
        return HighestWeight((q,))
    return HighestWeight((q, 1) + (0,) * (n - 3))


# ---------------------------------------------------------------------------
# Casimir operator, highest weight vectors, isotypic projections
# ---------------------------------------------------------------------------

def _casimir_column(m: WeightModule, j: int) -> Vec:
    spec = m.algebra
    basis = _algebra_basis(spec)
    dual = _dual_coefficients(spec)
    n = len(basis)
    # u_b = x_b e_j for every basis element
    us = [m.actions[basis[b][0]][j] for b in range(n)]
    out: Vec = {}
    for a in range(n):
        # v = (dual of x_a) e_j
        v: Vec = {}
        for b in range(n):
            c = dual[a][b]
            if not c:
                continue
            for r, x in us[b].items():
                cur = v.get(r)
                nv = c * x if cur is None else cur + c * x
                if nv:
                    v[r] = nv
                elif cur is not None:
                    del v[r]
        if not v:
            continue
        w = act_vec(m.actions[basis[a][0]], v)
        for r, x in w.items():
            cur = out.get(r)
            nv = x if cur is None else cur + x
            if nv:
                out[r] = nv
            elif cur is not None:
                del out[r]
    return out


def casimir_blocks(m: WeightModule) -> dict[tuple[int, ...], list[list[Fraction]]]:
    """Dense Casimir block per weight; the operator preserves weight spaces."""
    decomp = m.weight_decomposition()
    blocks = {}
    for w in sorted(decomp):
        idx = decomp[w]
        pos = {i: t for t, i in enumerate(idx)}
        size = len(idx)
        block = [[Fraction(0)] * size for _ in range(size)]
        for t, j in enumerate(idx):
            col = _casimir_column(m, j)
            for r, v in col.items():
                if r not in pos:
                    raise ArithmeticError("Casimir does not preserve weight spaces")
                block[pos[r]][t] = v
        blocks[w] = block
    return blocks


def casimir_matrix(m: WeightModule) -> RationalMatrix:
    entries = {}
    decomp = m.weight_decomposition()
    for w, block in casimir_blocks(m).items():
        idx = decomp[w]
        for rr, row in enumerate(block):
            for cc, v in enumerate(row):
                if v:
                    entries[(idx[rr], idx[cc])] = v
    return RationalMatrix(m.dimension, m.dimension, entries)


def highest_weight_vectors(m: WeightModule) -> list[tuple[HighestWeight, Vec]]:
    """Basis of the joint kernel of the simple raising operators, tagged by weight.

    The multiset of returned weights is the irreducible decomposition of m.
    """
    spec = m.algebra
    raising = [m.actions[label] for label in spec.raising_labels()]
    decomp = m.weight_decomposition()
    out = []
    for w in sorted(decomp, reverse=True):
        idx = decomp[w]
        entries = {}
        row_off = 0
        for cols in raising:
            for t, j in enumerate(idx):
                for r, v in cols[j].items():
                    entries[(row_off + r, t)] = v
            row_off += m.dimension
        mat = RationalMatrix(row_off, len(idx), entries)
        for kv in mat.kernel_basis():
            vec = {idx[t]: v for t, v in kv.items()}
            out.append((spec.fundamental_from_weight(w), vec))
    return out


def _dense_block_polynomial(block, eigenvalues, target) -> list[list[Fraction]]:
    """Evaluate prod (B - c')/(target - c') over eigenvalues != target."""
    size = len(block)
    out = [[ONE if i == j else Fraction(0) for j in range(size)] for i in range(size)]
    for c in eigenvalues:
        if c == target:
            continue
        scale = ONE / (target - c)
        nxt = [[Fraction(0)] * size for _ in range(size)]
        for i in range(size):
            for k in range(size):
                f = out[i][k]
                if not f:
                    continue
                row = block[k]
                for j in range(size):
                    v = row[j] - (c if k == j else 0)
                    if v:
                        nxt[i][j] += f * scale * v
        out = nxt
    return out


def isotypic_projection(m: WeightModule, hw: HighestWeight, *,
                        blocks=None, constituents=None) -> RationalMatrix:
    """Exact idempotent projecting onto the hw-isotypic constituent.

    Requires multiplicity at most one and no Casimir eigenvalue collision
    between hw and a non-isomorphic constituent.  ``blocks`` and
    ``constituents`` accept precomputed Casimir blocks and highest-weight
    data to avoid recomputation.
    """
    spec = m.algebra
    target = casimir_eigenvalue(spec, hw)
    if constituents is None:
        constituents = highest_weight_vectors(m)
    emap: dict[Fraction, list[HighestWeight]] = {}
    for h, _vec in constituents:
        emap.setdefault(casimir_eigenvalue(spec, h), []).append(h)
    for c, hws in emap.items():
        if c == target:
            others = [h for h in hws if h != hw]
            if others:
                raise AmbiguousDecompositionError(
                    f"Casimir eigenvalue {c} shared by {hw} and {others}; "
                    "a finer invariant operator is needed")
            if hws.count(hw) > 1:
                raise AmbiguousDecompositionError(
                    f"constituent {hw} has multiplicity {hws.count(hw)} > 1")
    eigenvalues = sorted(emap)
    decomp = m.weight_decomposition()
    if blocks is None:
        blocks = casimir_blocks(m)
    entries = {}
    for w, block in blocks.items():
        idx = decomp[w]
        pb = _dense_block_polynomial(block, eigenvalues, target)
        for rr in range(len(idx)):
            for cc in range(len(idx)):
                if pb[rr][cc]:
                    entries[(idx[rr], idx[cc])] = pb[rr][cc]
    return RationalMatrix(m.dimension, m.dimension, entries)


def casimir_eigenspace(m: WeightModule, eigenvalue: Fraction, *, blocks=None) -> list[Vec]:
    """Echelonized basis of ker(Casimir - eigenvalue), weight block by block."""
    decomp = m.weight_decomposition()
    if blocks is None:
        blocks = casimir_blocks(m)
    out = []
    for w, block in sorted(blocks.items()):
        idx = decomp[w]
        size = len(idx)
        entries = {}
        for rr in range(size):
            for cc in range(size):
                v = block[rr][cc] - (eigenvalue if rr == cc else 0)
                if v:
                    entries[(rr, cc)] = v
        mat = RationalMatrix(size, size, entries)
        for kv in mat.kernel_basis():
            out.append({idx[t]: v for t, v in kv.items()})
    return out
