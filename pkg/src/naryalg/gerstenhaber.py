"""Insertion calculus for multilinear maps on a finite-dimensional space.

A MultiMap stores the structure constants of m: V^{otimes k} -> V exactly.
The module implements the comb-insertion f at slot i, the signed insertion
sum f * g, the partial associativity defect A(mu), the theta operator, the
shuffle Jacobi sum, and the degree-7 composition identities for ternary
multiplications.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from .exactnum import (
    DenseTensor,
    normalize_scalar,
    scalar_from_str,
    scalar_to_str,
)


@lru_cache(maxsize=None)
def _index_tuples(d: int, k: int) -> tuple:
    return tuple(product(range(d), repeat=k))


def _tuple_flat(d: int, inputs) -> int:
    flat = 0
    for i in inputs:
        flat = flat * d + i
    return flat


class MultiMap:
    """Multilinear map V^{otimes arity} -> V over a d-dimensional space.

    coeffs[(i_1..i_k), j] is the e_j coefficient of m(e_{i_1},...,e_{i_k}).
    Stored dense (row-major, inputs then output); iterated sparsely.
    """

    __slots__ = ("dim", "arity", "coeffs", "_items")

    def __init__(self, dim: int, arity: int, coeffs: DenseTensor):
        if dim < 1:
            raise ValueError("dim must be positive")
        if arity < 1:
            raise ValueError("arity must be positive")
        expected = (dim,) * arity + (dim,)
        if coeffs.shape != expected:
            raise ValueError(f"coeffs shape {coeffs.shape}, expected {expected}")
        self.dim = dim
        self.arity = arity
        self.coeffs = coeffs
        self._items = None

    @classmethod
    def zero(cls, dim: int, arity: int) -> "MultiMap":
        return cls(dim, arity, DenseTensor.zeros((dim,) * arity + (dim,)))

    @classmethod
    def from_entries(cls, dim: int, arity: int, entries) -> "MultiMap":
        """entries: mapping (input tuple, output index) -> coefficient."""
        flat = [0] * (dim ** arity * dim)
        for (inputs, out), coef in entries.items():
            if len(inputs) != arity:
                raise ValueError(f"input tuple {inputs} has wrong length")
            if not all(0 <= i < dim for i in inputs) or not 0 <= out < dim:
                raise ValueError(f"index out of range in ({inputs}, {out})")
            flat[_tuple_flat(dim, inputs) * dim + out] += coef
        return cls(dim, arity, DenseTensor((dim,) * arity + (dim,), [normalize_scalar(Fraction(v)) if not isinstance(v, int) else v for v in flat]))

    @classmethod
    def identity(cls, dim: int) -> "MultiMap":
        return cls.from_entries(dim, 1, {((i,), i): 1 for i in range(dim)})

    def items(self):
        """Nonzero structure constants as (input tuple, output index, coef)."""
        if self._items is None:
            d, k = self.dim, self.arity
            tuples = _index_tuples(d, k)
            ent = self.coeffs.entries
            out = []
            pos = 0
            for inputs in tuples:
                for j in range(d):
                    c = ent[pos]
                    if c:
                        out.append((inputs, j, c))
                    pos += 1
            self._items = out
        return self._items

    def coef(self, inputs, out) -> int | Fraction:
        return self.coeffs.entries[_tuple_flat(self.dim, inputs) * self.dim + out]

    def value_at(self, inputs) -> dict:
        """m(e_inputs) as {output index: coefficient}, zeros omitted."""
        d = self.dim
        base = _tuple_flat(d, inputs) * d
        ent = self.coeffs.entries
        return {j: ent[base + j] for j in range(d) if ent[base + j]}

    def is_zero(self) -> bool:
        return self.coeffs.is_zero()

    def __eq__(self, other):
        if not isinstance(other, MultiMap):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.arity == other.arity
            and self.coeffs == other.coeffs
        )

    __hash__ = None

    def __add__(self, other):
        self._check_compatible(other)
        return MultiMap(self.dim, self.arity, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check_compatible(other)
        return MultiMap(self.dim, self.arity, self.coeffs - other.coeffs)

    def __neg__(self):
        return MultiMap(self.dim, self.arity, -self.coeffs)

    def scale(self, c):
        return MultiMap(self.dim, self.arity, self.coeffs.scale(c))

    def _check_compatible(self, other):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} vs {other.arity}")

    def first_nonzero(self):
        """(multi-index incl. output slot, value) of the first nonzero entry."""
        d = self.dim
        for pos, c in enumerate(self.coeffs.entries):
            if c:
                flat_in, j = divmod(pos, d)
                inputs = []
                for _ in range(self.arity):
                    flat_in, r = divmod(flat_in, d)
                    inputs.append(r)
                return tuple(reversed(inputs)) + (j,), c
        return None

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "arity": self.arity,
            "entries": [
                {"in": list(inputs), "out": j, "coef": scalar_to_str(c)}
                for inputs, j, c in self.items()
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "MultiMap":
        entries = {}
        for e in data.get("entries", []):
            key = (tuple(e["in"]), e["out"])
            entries[key] = entries.get(key, 0) + scalar_from_str(e["coef"])
        return cls.from_entries(data["dim"], data["arity"], entries)

    def __repr__(self):
        nnz = sum(1 for v in self.coeffs.entries if v)
        return f"MultiMap(dim={self.dim}, arity={self.arity}, nnz={nnz})"


@dataclass(frozen=True)
class IdentityReport:
    name: str
    holds: bool
    witness: tuple | None = None

    def __post_init__(self):
        if self.holds != (self.witness is None):
            raise ValueError("holds must mirror absence of witness")


def report_from_defect(name: str, defect: MultiMap) -> IdentityReport:
    w = defect.first_nonzero()
    if w is None:
        return IdentityReport(name, True)
    return IdentityReport(name, False, w)


def insert_at(f: MultiMap, g: MultiMap, i: int) -> MultiMap:
    """f with g inserted in its i-th argument slot, 1-based."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    if not 1 <= i <= f.arity:
        raise ValueError(f"position {i} not in 1..{f.arity}")
    d = f.dim
    k, l = f.arity, g.arity
    res_arity = k + l - 1
    flat = [0] * (d ** res_arity * d)
    by_slot: dict[int, list] = {}
    for x, j, cf in f.items():
        by_slot.setdefault(x[i - 1], []).append((x, j, cf))
    for y, m, cg in g.items():
        bucket = by_slot.get(m)
        if not bucket:
            continue
        for x, j, cf in bucket:
            inputs = x[: i - 1] + y + x[i:]
            flat[_tuple_flat(d, inputs) * d + j] += cf * cg
    return MultiMap(d, res_arity, DenseTensor((d,) * res_arity + (d,), flat))


def gprod(f: MultiMap, g: MultiMap) -> MultiMap:
    """Signed insertion sum: sum_i (-1)^((i-1)(arity(g)-1)) f with g at slot i."""
    if f.dim != g.dim:
        raise ValueError(f"dimension mismatch: {f.dim} vs {g.dim}")
    l = g.arity
    total = MultiMap.zero(f.dim, f.arity + l - 1)
    for i in range(1, f.arity + 1):
        term = insert_at(f, g, i)
        if ((i - 1) * (l - 1)) % 2:
            total = total - term
        else:
            total = total + term
    return total


def partial_assoc_defect(mu: MultiMap) -> MultiMap:
    return gprod(mu, mu)


def total_assoc_check(mu: MultiMap) -> IdentityReport:
    """All unsigned self-insertions pairwise equal."""
    name = "total_associativity"
    inserted = [insert_at(mu, mu, i) for i in range(1, mu.arity + 1)]
    for a in range(len(inserted)):
        for b in range(a + 1, len(inserted)):
            diff = inserted[a] - inserted[b]
            w = diff.first_nonzero()
            if w is not None:
                return IdentityReport(name, False, (a + 1, b + 1) + w)
    return IdentityReport(name, True)


def prelie_defect(f: MultiMap, g: MultiMap, h: MultiMap) -> MultiMap:
    """(f*g)*h - f*(g*h) minus its g,h-swapped mirror; identically zero."""
    m, p = g.arity, h.arity
    lhs = gprod(gprod(f, g), h) - gprod(f, gprod(g, h))
    rhs = gprod(gprod(f, h), g) - gprod(f, gprod(h, g))
    if ((m - 1) * (p - 1)) % 2:
        return lhs + rhs
    return lhs - rhs


class Operator:
    """Formal sum of tensor words mapping V^{otimes source} -> V^{otimes target}.

    Each word is a tuple of segments: ("id", m) passes m arguments through,
    ("map", f) consumes arity(f) arguments and emits one. Id_0 segments are
    simply absent.
    """

    __slots__ = ("source_power", "target_power", "terms")

    def __init__(self, source_power: int, target_power: int, terms):
        terms = [(c, tuple(word)) for c, word in terms]
        for _, word in terms:
            src = 0
            tgt = 0
            for seg in word:
                kind = seg[0]
                if kind == "id":
                    m = seg[1]
                    if m < 1:
                        raise ValueError("id segment must have m >= 1")
                    src += m
                    tgt += m
                elif kind == "map":
                    src += seg[1].arity
                    tgt += 1
                else:
                    raise ValueError(f"bad segment {seg!r}")
            if src != source_power or tgt != target_power:
                raise ValueError(
                    f"word arity {src}->{tgt}, operator is {source_power}->{target_power}"
                )
        self.source_power = source_power
        self.target_power = target_power
        self.terms = terms

    def __repr__(self):
        return f"Operator({self.source_power}->{self.target_power}, {len(self.terms)} words)"


def theta(mu: MultiMap, k: int) -> Operator:
    """Two-copy insertion operator: sum over p,q >= 0 with p+q <= k-2 of
    Id_p (x) mu (x) Id_q (x) mu (x) Id_{k-p-q-2}."""
    if k < 2:
        raise ValueError("k must be at least 2")
    n = mu.arity
    words = []
    for p in range(k - 1):
        for q in range(k - 1 - p):
            r = k - p - q - 2
            word = []
            if p:
                word.append(("id", p))
            word.append(("map", mu))
            if q:
                word.append(("id", q))
            word.append(("map", mu))
            if r:
                word.append(("id", r))
            words.append((1, tuple(word)))
    return Operator(2 * n + k - 2, k, words)


def apply_operator(phi: MultiMap, op: Operator) -> MultiMap:
    """The composite phi after op as a MultiMap of arity op.source_power.

    Iterates sparsely: phi entries are split across each word's segments, id
    segments pin their argument block, map segments range over their entries
    with matching output.
    """
    if phi.arity != op.target_power:
        raise ValueError(
            f"phi arity {phi.arity} vs operator target {op.target_power}"
        )
    d = phi.dim
    a = op.source_power
    flat = [0] * (d ** a * d)
    for coef, word in op.terms:
        for seg in word:
            if seg[0] == "map" and seg[1].dim != d:
                raise ValueError("operator map dimension mismatch")
        # index each map segment's entries by output basis vector
        seg_entries = []
        for seg in word:
            if seg[0] == "map":
                by_out: dict[int, list] = {}
                for y, m, c in seg[1].items():
                    by_out.setdefault(m, []).append((y, c))
                seg_entries.append(by_out)
            else:
                seg_entries.append(None)
        for kt, j, cphi in phi.items():
            pos = 0
            options = []
            dead = False
            for seg, by_out in zip(word, seg_entries):
                if seg[0] == "id":
                    m = seg[1]
                    options.append([(kt[pos : pos + m], 1)])
                    pos += m
                else:
                    bucket = by_out.get(kt[pos], [])
                    if not bucket:
                        dead = True
                        break
                    options.append(bucket)
                    pos += 1
            if dead:
                continue
            for combo in product(*options):
                inputs = []
                c = coef * cphi
                for block, cb in combo:
                    inputs.extend(block)
                    if cb != 1:
                        c *= cb
                flat[_tuple_flat(d, tuple(inputs)) * d + j] += c
    return MultiMap(d, a, DenseTensor((d,) * a + (d,), flat))


def _parity(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return inv % 2


def antisymmetrize(lam: MultiMap) -> MultiMap:
    """Signed sum of lam over all argument permutations."""
    d, n = lam.dim, lam.arity
    flat = [0] * (d ** n * d)
    items = lam.items()
    for perm in permutations(range(n)):
        sign = -1 if _parity(perm) else 1
        for y, j, c in items:
            permuted = tuple(y[perm[t]] for t in range(n))
            flat[_tuple_flat(d, permuted) * d + j] += sign * c
    return MultiMap(d, n, DenseTensor((d,) * n + (d,), flat))


def is_antisymmetric(m: MultiMap) -> bool:
    """Sign flip under every adjacent argument transposition."""
    if m.arity == 1:
        return True
    for t in range(m.arity - 1):
        for x, j, c in m.items():
            swapped = list(x)
            swapped[t], swapped[t + 1] = swapped[t + 1], swapped[t]
            if m.coef(tuple(swapped), j) != -c:
                return False
    return True


def jacobi_defect(mu: MultiMap) -> MultiMap:
    """Shuffle-sum Jacobi defect of an antisymmetric n-ary bracket.

    Sums sign(s) * mu(mu(X_{s(1)},..,X_{s(n)}), X_{s(n+1)},..) over all
    (n, n-1)-shuffles s of {1,..,2n-1}, generated directly from n-subsets.
    """
    if not is_antisymmetric(mu):
        raise ValueError("jacobi_defect requires an antisymmetric map")
    n = mu.arity
    d = mu.dim
    comp = insert_at(mu, mu, 1)
    w = 2 * n - 1
    flat = [0] * (d ** w * d)
    universe = range(w)
    comp_items = comp.items()
    for first in combinations(universe, n):
        rest = tuple(sorted(set(universe) - set(first)))
        s = first + rest  # s[m] = position (0-based) fed into comp slot m
        sign = -1 if _parity(s) else 1
        for y, j, c in comp_items:
            x = [0] * w
            for m in range(w):
                x[s[m]] = y[m]
            flat[_tuple_flat(d, tuple(x)) * d + j] += sign * c
    return MultiMap(d, w, DenseTensor((d,) * w + (d,), flat))


def _compose_words(mu: MultiMap, outer_word, inner_word) -> MultiMap:
    """mu after outer_word after inner_word, evaluated by two operator hops."""
    def power(word):
        src = tgt = 0
        for seg in word:
            if seg[0] == "id":
                src += seg[1]
                tgt += seg[1]
            else:
                src += seg[1].arity
                tgt += 1
        return src, tgt

    o_src, o_tgt = power(outer_word)
    i_src, i_tgt = power(inner_word)
    if o_src != i_tgt:
        raise ValueError("word powers do not compose")
    step = apply_operator(mu, Operator(o_src, o_tgt, [(1, outer_word)]))
    return apply_operator(step, Operator(i_src, i_tgt, [(1, inner_word)]))


def degree7_defects(mu: MultiMap) -> tuple[MultiMap, MultiMap]:
    """Defects of the two degree-7 identities for ternary mu with A(mu)=0."""
    if mu.arity != 3:
        raise ValueError("degree-7 identities need a ternary map")
    if not partial_assoc_defect(mu).is_zero():
        raise ValueError("degree-7 identities need a partially associative map")
    m = ("map", mu)

    def w(*segs):
        return tuple(segs)

    id1, id2, id3, id4 = ("id", 1), ("id", 2), ("id", 3), ("id", 4)
    first = (
        _compose_words(mu, w(id1, m, id1), w(m, id4))
        + _compose_words(mu, w(m, id2), w(id3, m, id1))
        + _compose_words(mu, w(id2, m), w(m, id4))
        + _compose_words(mu, w(m, id2), w(id4, m))
        + _compose_words(mu, w(id2, m), w(id1, m, id3))
        + _compose_words(mu, w(id1, m, id1), w(id4, m))
    )
    second = (
        _compose_words(mu, w(m, id2), w(m, id4))
        - _compose_words(mu, w(m, id2), w(id3, m, id1))
        + _compose_words(mu, w(id2, m), w(id4, m))
        - _compose_words(mu, w(id2, m), w(id1, m, id3))
    )
    return first, second


def composition_relation_defects(mu: MultiMap) -> IdentityReport:
    """Commutation of disjoint insertions, checked over both index families.

    Family one: (mu *_j mu) *_i mu = (mu *_i mu) *_{j+n-1} mu for i < j <= n.
    Family two re-indexes the outer slot past the inserted block: for
    i >= n+1 and j <= i-n, (mu *_j mu) *_i mu = (mu *_{i-n+1} mu) *_j mu.
    """
    n = mu.arity
    name = "composition_relations"
    self_ins = {i: insert_at(mu, mu, i) for i in range(1, n + 1)}
    for j in range(1, n + 1):
        for i in range(1, j):
            lhs = insert_at(self_ins[j], mu, i)
            rhs = insert_at(self_ins[i], mu, j + n - 1)
            wtn = (lhs - rhs).first_nonzero()
            if wtn is not None:
                return IdentityReport(name, False, ("family1", i, j) + wtn)
    for i in range(n + 1, 2 * n):
        for j in range(1, i - n + 1):
            lhs = insert_at(self_ins[j], mu, i)
            rhs = insert_at(self_ins[i - n + 1], mu, j)
            wtn = (lhs - rhs).first_nonzero()
            if wtn is not None:
                return IdentityReport(name, False, ("family2", i, j) + wtn)
    return IdentityReport(name, True)
