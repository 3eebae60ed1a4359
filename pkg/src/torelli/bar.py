"""Normalized bar chains over the surface group and its nilpotent quotients.

Chains are finite integer combinations of tuples of group labels with no
identity entries (the normalized complex).  Two label kinds are supported:
free-group words and truncated-group elements.  The module provides

  * the fundamental 2-chain C with dC = -[l] built from a staircase,
  * a constructive bounding algorithm for 2-cycles of the free group,
    via a translation-equivariant comparison homotopy between the bar
    resolution and the rank-2g Fox resolution,
  * the pushforward along pi -> Gamma_k,
  * the cap of a 3-cycle over Gamma_k against the central-extension
    cocycle, landing in H tensor (weight-k layer); the global sign
    epsilon of the cap is a calibration constant fixed elsewhere.
"""

from __future__ import annotations

import threading

from .hall import LieElement, get_basis
from .malcev import MalcevContext, NilElement
from .words import Word, apply_endo, boundary_word, word

__all__ = [
    "BarChain",
    "WORD_LABELS",
    "NilLabels",
    "bar_chain",
    "bar_boundary",
    "staircase",
    "fundamental_two_chain",
    "fox_derivatives",
    "ResolutionElement",
    "res_boundary",
    "iota_rho",
    "contraction",
    "ComparisonHomotopy",
    "bound_two_cycle",
    "act_on_chain",
    "push",
    "antisym_cycle",
    "cap_d2",
    "chain_to_jsonable",
]

_EMPTY = word("")


class WordLabels:
    """Label operations for free-group words."""

    kind = "word"

    @staticmethod
    def mul(a: Word, b: Word) -> Word:
        return a * b

    @staticmethod
    def is_id(a: Word) -> bool:
        return not a.letters


WORD_LABELS = WordLabels()


class NilLabels:
    """Label operations for elements of a fixed truncation Gamma_k."""

    kind = "nil"

    def __init__(self, ctx: MalcevContext):
        self.ctx = ctx

    @staticmethod
    def mul(a: NilElement, b: NilElement) -> NilElement:
        return a * b

    @staticmethod
    def is_id(a: NilElement) -> bool:
        return a.is_identity()


class BarChain:
    """Sparse normalized bar chain: tuples of non-identity labels -> int."""

    __slots__ = ("degree", "ops", "terms")

    def __init__(self, degree: int, ops, terms: dict | None = None):
        self.degree = degree
        self.ops = ops
        self.terms: dict[tuple, int] = {}
        if terms:
            for tup, coeff in terms.items():
                if not coeff:
                    continue
                if len(tup) != degree:
                    raise ValueError("tuple of wrong degree")
                if any(ops.is_id(x) for x in tup):
                    continue
                nv = self.terms.get(tup, 0) + coeff
                if nv:
                    self.terms[tup] = nv
                elif tup in self.terms:
                    del self.terms[tup]

    def __add__(self, other: "BarChain") -> "BarChain":
        if self.degree != other.degree:
            raise ValueError("mixed degrees")
        out = dict(self.terms)
        for t, v in other.terms.items():
            nv = out.get(t, 0) + v
            if nv:
                out[t] = nv
            elif t in out:
                del out[t]
        res = BarChain(self.degree, self.ops)
        res.terms = out
        return res

    def __sub__(self, other: "BarChain") -> "BarChain":
        return self + other.scale(-1)

    def scale(self, n: int) -> "BarChain":
        res = BarChain(self.degree, self.ops)
        if n:
            res.terms = {t: v * n for t, v in self.terms.items()}
        return res

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BarChain):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"BarChain(degree={self.degree}, {len(self.terms)} terms)"


def bar_chain(degree: int, items, ops=WORD_LABELS) -> BarChain:
    """Build a chain from (tuple, coeff) pairs, normalizing as it goes."""
    acc: dict[tuple, int] = {}
    for tup, coeff in items:
        acc[tup] = acc.get(tup, 0) + coeff
    return BarChain(degree, ops, acc)


def bar_boundary(chain: BarChain) -> BarChain:
    """Alternating face sum; inner faces multiply adjacent labels.
    Faces that produce an identity label are dropped (normalization)."""
    if chain.degree < 1:
        raise ValueError("boundary needs degree >= 1")
    ops = chain.ops
    out: dict[tuple, int] = {}

    def put(tup: tuple, v: int) -> None:
        if any(ops.is_id(x) for x in tup):
            return
        nv = out.get(tup, 0) + v
        if nv:
            out[tup] = nv
        elif tup in out:
            del out[tup]

    for tup, coeff in chain.terms.items():
        n = len(tup)
        put(tup[1:], coeff)
        sign = -1
        for i in range(n - 1):
            merged = tup[:i] + (ops.mul(tup[i], tup[i + 1]),) + tup[i + 2 :]
            put(merged, sign * coeff)
            sign = -sign
        put(tup[:-1], sign * coeff)
    res = BarChain(chain.degree - 1, ops)
    res.terms = out
    return res


def staircase(w: Word) -> BarChain:
    """For w with letter sequence y_1..y_m, the 2-chain
    sum_{i=1}^{m-1} [y_1..y_i | y_{i+1}]; boundary telescopes to
    [letters] - [w] pieces."""
    items = []
    prefix = _EMPTY
    letters = [word([s]) for s in w.letters]
    for i, y in enumerate(letters):
        if i > 0:
            items.append(((prefix, y), 1))
        prefix = prefix * y
    return bar_chain(2, items)


def fundamental_two_chain(g: int) -> BarChain:
    """The 2-chain C over pi with dC = -[boundary word], exactly.

    C = staircase(l) - sum_i ([a_i|a_i^-1] + [b_i|b_i^-1]); the correction
    simplices cancel the single-letter faces the staircase leaves behind.
    """
    if g < 1:
        raise ValueError("genus must be >= 1")
    ell = boundary_word(g)
    c = staircase(ell)
    items = []
    for i in range(1, 2 * g + 1):
        x = word([i])
        items.append(((x, ~x), -1))
    return c + bar_chain(2, items)


def fox_derivatives(w: Word) -> dict[int, dict[Word, int]]:
    """All free differential derivatives of w at once: generator index ->
    group-ring element as {word: coeff}.  Satisfies d(uv) = du + u.dv."""
    out: dict[int, dict[Word, int]] = {}
    prefix = _EMPTY
    for s in w.letters:
        x = abs(s)
        lw = word([s])
        d = out.setdefault(x, {})
        if s > 0:
            key = prefix
            d[key] = d.get(key, 0) + 1
        else:
            key = prefix * lw
            d[key] = d.get(key, 0) - 1
        if not d[key]:
            del d[key]
        prefix = prefix * lw
    return {x: d for x, d in out.items() if d}


class ResolutionElement:
    """Finite Z-combination of (translate, basis tuple) pairs in the
    normalized bar resolution of Z over Z[pi]."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: dict | None = None):
        self.degree = degree
        self.terms: dict[tuple[Word, tuple], int] = {}
        if terms:
            for (g, tup), coeff in terms.items():
                if not coeff or any(not x.letters for x in tup):
                    continue
                if len(tup) != degree:
                    raise ValueError("basis tuple of wrong degree")
                key = (g, tup)
                nv = self.terms.get(key, 0) + coeff
                if nv:
                    self.terms[key] = nv
                elif key in self.terms:
                    del self.terms[key]

    def __add__(self, other: "ResolutionElement") -> "ResolutionElement":
        if self.degree != other.degree:
            raise ValueError("mixed degrees")
        out = dict(self.terms)
        for k, v in other.terms.items():
            nv = out.get(k, 0) + v
            if nv:
                out[k] = nv
            elif k in out:
                del out[k]
        res = ResolutionElement(self.degree)
        res.terms = out
        return res

    def __sub__(self, other: "ResolutionElement") -> "ResolutionElement":
        return self + other.scale(-1)

    def scale(self, n: int) -> "ResolutionElement":
        res = ResolutionElement(self.degree)
        if n:
            res.terms = {k: v * n for k, v in self.terms.items()}
        return res

    def translate(self, g: Word) -> "ResolutionElement":
        res = ResolutionElement(self.degree)
        res.terms = {(g * h, tup): v for (h, tup), v in self.terms.items()}
        return res

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ResolutionElement):
            return NotImplemented
        return self.degree == other.degree and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"ResolutionElement(degree={self.degree}, {len(self.terms)} terms)"


def res_element(degree: int, items) -> ResolutionElement:
    acc: dict[tuple[Word, tuple], int] = {}
    for key, coeff in items:
        acc[key] = acc.get(key, 0) + coeff
    return ResolutionElement(degree, acc)


def res_boundary(elt: ResolutionElement) -> ResolutionElement:
    """Resolution differential; the first face moves the leading label
    into the translate."""
    if elt.degree < 1:
        raise ValueError("boundary needs degree >= 1")
    items = []
    for (g, tup), coeff in elt.terms.items():
        n = len(tup)
        items.append(((g * tup[0], tup[1:]), coeff))
        sign = -1
        for i in range(n - 1):
            merged = tup[:i] + (tup[i] * tup[i + 1],) + tup[i + 2 :]
            items.append(((g, merged), sign * coeff))
            sign = -sign
        items.append(((g, tup[:-1]), sign * coeff))
    return ResolutionElement(elt.degree - 1, dict_from(items))


def dict_from(items) -> dict:
    acc: dict = {}
    for k, v in items:
        acc[k] = acc.get(k, 0) + v
    return acc


def iota_rho(elt: ResolutionElement) -> ResolutionElement:
    """Round trip through the Fox resolution: identity in degree 0,
    Fox-derivative spread in degree 1, zero in degrees >= 2 (the free
    group has no higher syzygies)."""
    if elt.degree == 0:
        return elt
    if elt.degree >= 2:
        return ResolutionElement(elt.degree)
    items = []
    for (g, tup), coeff in elt.terms.items():
        for x, d in fox_derivatives(tup[0]).items():
            xw = word([x])
            for v, c in d.items():
                items.append(((g * v, (xw,)), coeff * c))
    return ResolutionElement(1, dict_from(items))


def contraction(elt: ResolutionElement) -> ResolutionElement:
    """Z-linear contracting homotopy: (g, tup) -> (e, (g,) + tup); kills
    translate-identity terms by normalization."""
    items = []
    for (g, tup), coeff in elt.terms.items():
        items.append(((_EMPTY, (g,) + tup), coeff))
    return ResolutionElement(elt.degree + 1, dict_from(items))


class ComparisonHomotopy:
    """Translation-equivariant homotopy u with du + ud = iota.rho - id.

    Defined on translate-identity basis elements by the recursion
    u = contraction(iota.rho - id - u.d) and extended so that
    u(g, tup) = g . u(e, tup).  Being equivariant it descends to
    coinvariant (plain bar) chains, where it bounds 2-cycles: for dz = 0
    in degree 2, d(-u z) = z because the Fox resolution stops there.
    The memo table is shared and lock-protected.
    """

    def __init__(self):
        self._memo: dict[tuple, ResolutionElement] = {}
        self._lock = threading.RLock()

    def of_tuple(self, tup: tuple) -> ResolutionElement:
        got = self._memo.get(tup)
        if got is not None:
            return got
        with self._lock:
            return self._of_tuple_locked(tup)

    def _of_tuple_locked(self, tup: tuple) -> ResolutionElement:
        got = self._memo.get(tup)
        if got is not None:
            return got
        e = ResolutionElement(len(tup), {(_EMPTY, tup): 1})
        w = iota_rho(e) - e
        if len(tup) >= 1:
            w = w - self(res_boundary(e))
        out = contraction(w)
        self._memo[tup] = out
        return out

    def __call__(self, elt: ResolutionElement) -> ResolutionElement:
        out = ResolutionElement(elt.degree + 1)
        for (g, tup), coeff in elt.terms.items():
            out = out + self.of_tuple(tup).translate(g).scale(coeff)
        return out


_homotopy = ComparisonHomotopy()


def bound_two_cycle(z: BarChain) -> BarChain:
    """Given a 2-cycle z over pi, return a 3-chain D with dD = z, exactly.

    Lifts z to translate-identity resolution elements, applies -u, and
    reads the result back as a plain chain.
    """
    if z.degree != 2 or z.ops.kind != "word":
        raise ValueError("bounding needs a degree-2 chain over free-group words")
    if bar_boundary(z):
        raise ValueError("input chain is not a cycle")
    lifted = ResolutionElement(2, {(_EMPTY, t): v for t, v in z.terms.items()})
    image = _homotopy(lifted).scale(-1)
    items = [(tup, coeff) for (g, tup), coeff in image.terms.items()]
    return bar_chain(3, items)


def act_on_chain(phi, chain: BarChain) -> BarChain:
    """Entrywise action of an endomorphism on a word-labeled chain."""
    if chain.ops.kind != "word":
        raise ValueError("entrywise action is defined on word labels")
    items = [
        (tuple(apply_endo(phi, x) for x in tup), coeff)
        for tup, coeff in chain.terms.items()
    ]
    return bar_chain(chain.degree, items)


def push(chain: BarChain, ctx: MalcevContext) -> BarChain:
    """Relabel a word chain into Gamma_k; tuples acquiring an identity
    entry are dropped.  This is a chain map onto normalized chains."""
    if chain.ops.kind != "word":
        raise ValueError("push starts from word labels")
    ops = NilLabels(ctx)
    items = [
        (tuple(ctx.element(x) for x in tup), coeff)
        for tup, coeff in chain.terms.items()
    ]
    return BarChain(chain.degree, ops, dict_from(items))


def antisym_cycle(x: NilElement, y: NilElement, z: NilElement) -> BarChain:
    """Full antisymmetrization sum_{s in S3} sgn(s) [s(x)|s(y)|s(z)].
    Over an abelian quotient this is a cycle."""
    ops = NilLabels(x.ctx)
    items = []
    for perm, sign in (
        ((0, 1, 2), 1),
        ((1, 2, 0), 1),
        ((2, 0, 1), 1),
        ((1, 0, 2), -1),
        ((0, 2, 1), -1),
        ((2, 1, 0), -1),
    ):
        trip = (x, y, z)
        items.append((tuple(trip[i] for i in perm), sign))
    return BarChain(3, ops, dict_from(items))


def cap_d2(z: BarChain, epsilon: int) -> tuple[LieElement, ...]:
    """Cap a 3-cycle over Gamma_k with the extension cocycle of
    1 -> L_{k+1} -> Gamma_{k+1} -> Gamma_k -> 1:

        [g1|g2|g3] -> epsilon * (exponent vector of g1) tensor c(g2, g3)

    summed over terms.  Returns one weight-k Lie element per generator
    slot.  Boundaries map to zero, so this is well defined on homology.
    """
    if z.degree != 3 or z.ops.kind != "nil":
        raise ValueError("cap needs a degree-3 chain over a truncated group")
    if epsilon not in (1, -1):
        raise ValueError("epsilon must be +1 or -1")
    if bar_boundary(z):
        raise ValueError("input chain is not a cycle")
    ctx = z.ops.ctx
    up = get_basis(ctx.n, ctx.k)
    slots: list[LieElement] = [LieElement(up, {}) for _ in range(ctx.n)]
    for (g1, g2, g3), coeff in z.terms.items():
        coc = ctx.cocycle(g2, g3)
        if not coc.coeffs:
            continue
        ab = g1.log.weight_part(1).coeffs  # letters occupy indices 0..n-1
        for i in range(ctx.n):
            a = ab.get(i, 0)
            if a:
                slots[i] = slots[i] + coc.scale(epsilon * coeff * a)
    for i, s in enumerate(slots):
        assert s.is_integral(), f"cap value at slot {i} is not integral"
    return tuple(slots)


def chain_to_jsonable(chain: BarChain) -> list:
    """Stable JSON form: list of {labels, coeff}, labels as word strings
    or as integer exponent vectors, sorted for determinism."""
    from .words import format_word

    rows = []
    if chain.ops.kind == "word":
        for tup, coeff in chain.terms.items():
            rows.append({"labels": [format_word(x) for x in tup], "coeff": coeff})
        rows.sort(key=lambda r: r["labels"])
    else:
        ctx = chain.ops.ctx
        for tup, coeff in chain.terms.items():
            rows.append(
                {
                    "labels": [list(ctx.normal_form(x)) for x in tup],
                    "coeff": coeff,
                }
            )
        rows.sort(key=lambda r: r["labels"])
    return rows
