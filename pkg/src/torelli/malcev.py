"""Nilpotent truncations of the free group inside their Mal'cev completions.

Gamma_k is the free group on n = 2g generators modulo stage k-1 of its
lower central series (so Gamma_2 is the abelianization).  Its Mal'cev
completion is modeled on the rational points of the free nilpotent Lie
group of class c = k-1: an element is a group-like tensor, equal to
exp(x) for a unique Lie element x, and equality of log coordinates is
the equality authority.

Integral structure comes from Mal'cev coordinates of the second kind:
every element of Gamma_k is uniquely a product, in basis order, of
integer powers of the basic commutators (the group words obtained by
reading each Hall tree as an iterated group commutator [x,y] = xyx^-1y^-1).
Peeling those exponents weight by weight gives the NormalForm; extending
the exponent vector by zeros in weight k gives the canonical section
Gamma_k -> Gamma_{k+1}, whose failure to be a homomorphism is the
extension cocycle c(g,h) = s(g) s(h) s(gh)^-1 with values in the
weight-k lattice L_{k+1}.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .hall import HallBasis, LieElement, get_basis
from .tensor import TensorContext, t_scale
from .words import Endomorphism, MappingClassRep, Word, apply_endo, generator

__all__ = [
    "MalcevContext",
    "get_context",
    "NilElement",
    "NilAutomorphism",
    "log_word",
    "bch",
    "is_in_torelli",
    "induced_lie_auto",
]

_ONE = {(): 1}


class NilElement:
    """An element of (the Mal'cev completion of) Gamma_k, stored group-like."""

    __slots__ = ("ctx", "tensor", "_log", "_nf", "_hash")

    def __init__(self, ctx: "MalcevContext", tensor: dict):
        assert tensor.get((), 0) == 1, "group elements have constant term 1"
        self.ctx = ctx
        self.tensor = tensor
        self._log: LieElement | None = None
        self._nf: tuple[int, ...] | None = None
        self._hash: int | None = None

    @property
    def log(self) -> LieElement:
        if self._log is None:
            self._log = self.ctx.tc.to_lie(self.ctx.tc.log(self.tensor))
        return self._log

    def __mul__(self, other: "NilElement") -> "NilElement":
        if self.ctx is not other.ctx:
            raise ValueError("elements of different truncation levels")
        return NilElement(self.ctx, self.ctx.tc.mul(self.tensor, other.tensor))

    def inverse(self) -> "NilElement":
        return NilElement(self.ctx, self.ctx.tc.inverse(self.tensor))

    def __pow__(self, e: int) -> "NilElement":
        # exact one-parameter subgroup power, valid for any integer e
        return self.ctx.exp_lie(self.log.scale(e))

    def is_identity(self) -> bool:
        return len(self.tensor) == 1

    def _key(self):
        return tuple(sorted((w, Fraction(v)) for w, v in self.tensor.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NilElement):
            return NotImplemented
        if self.ctx.k != other.ctx.k or self.ctx.n != other.ctx.n:
            return False
        t1, t2 = self.tensor, other.tensor
        return len(t1) == len(t2) and all(t2.get(w) == v for w, v in t1.items())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx.n, self.ctx.k, self._key()))
        return self._hash

    def __repr__(self) -> str:
        return f"NilElement(k={self.ctx.k}, log={self.log!r})"


class MalcevContext:
    """All level-k machinery for Gamma_k on n letters (class c = k-1)."""

    def __init__(self, n: int, k: int):
        if k < 2:
            raise ValueError("truncation level k must be >= 2")
        self.n = n
        self.k = k
        self.c = k - 1
        self.basis: HallBasis = get_basis(n, self.c)
        self.tc = TensorContext(self.basis)
        self._lock = threading.RLock()
        self._word_group: dict[Word, dict] = {}
        self._log_word: dict[Word, LieElement] = {}
        self._basic_words: dict[int, Word] = {}
        self._basic_logs: dict[int, LieElement] = {}
        self._cocycle: dict[tuple, LieElement] = {}
        self._nf_product: dict[tuple, tuple] = {}
        self._letter_exp: dict[int, dict] = {}

    # -- group elements from words -----------------------------------------

    def _exp_letter(self, s: int) -> dict:
        cached = self._letter_exp.get(s)
        if cached is None:
            x = {(abs(s),): 1 if s > 0 else -1}
            cached = self.tc.exp(x)
            self._letter_exp[s] = cached
        return cached

    def word_group(self, w: Word) -> dict:
        """The group-like tensor of a free-group word (all prefixes cached)."""
        cached = self._word_group.get(w)
        if cached is not None:
            return cached
        letters = w.letters
        start = 0
        t = _ONE
        for j in range(len(letters) - 1, 0, -1):
            hit = self._word_group.get(Word.make(letters[:j]))
            if hit is not None:
                start, t = j, hit
                break
        with self._lock:
            for j in range(start, len(letters)):
                t = self.tc.mul(t, self._exp_letter(letters[j]))
                self._word_group.setdefault(Word.make(letters[: j + 1]), t)
        return t

    def log_word(self, w: Word) -> LieElement:
        cached = self._log_word.get(w)
        if cached is None:
            cached = self.tc.to_lie(self.tc.log(self.word_group(w)))
            with self._lock:
                self._log_word[w] = cached
        return cached

    def element(self, w: Word) -> NilElement:
        return NilElement(self, self.word_group(w))

    def identity(self) -> NilElement:
        return NilElement(self, dict(_ONE))

    def exp_lie(self, x: LieElement) -> NilElement:
        return NilElement(self, self.tc.exp(self.tc.from_lie(x)))

    def bch(self, x: LieElement, y: LieElement) -> LieElement:
        p = self.tc.mul(
            self.tc.exp(self.tc.from_lie(x)), self.tc.exp(self.tc.from_lie(y))
        )
        return self.tc.to_lie(self.tc.log(p))

    def up(self) -> "MalcevContext":
        return get_context(self.n, self.k + 1)

    def project(self, x: NilElement) -> NilElement:
        """Image of an element of Gamma_{k+1} in Gamma_k (drop weight k)."""
        if x.ctx.k != self.k + 1 or x.ctx.n != self.n:
            raise ValueError("project expects an element one level up")
        t = {w: v for w, v in x.tensor.items() if len(w) <= self.c}
        return NilElement(self, t)

    # -- basic commutators and second-kind coordinates ----------------------

    def basic_word(self, index: int) -> Word:
        """The Hall tree read as an iterated group commutator word."""
        cached = self._basic_words.get(index)
        if cached is not None:
            return cached
        tree = self.basis.trees[index]
        if isinstance(tree, int):
            out = generator(tree)
        else:
            l, r = self.basis.subtree_indices(index)
            u, v = self.basic_word(l), self.basic_word(r)
            out = u * v * ~u * ~v
        self._basic_words[index] = out
        return out

    def basic_log(self, index: int) -> LieElement:
        cached = self._basic_logs.get(index)
        if cached is None:
            cached = self.log_word(self.basic_word(index))
            self._basic_logs[index] = cached
        return cached

    def normal_form(self, x: NilElement) -> tuple[int, ...]:
        """Integer exponents of the collected form prod_i basic(i)^{e_i}.

        Raises if x is not in the integral lattice Gamma_k.
        """
        if x._nf is not None:
            return x._nf
        exps: list[int] = [0] * self.basis.dim
        rem = x.tensor
        for w in range(1, self.c + 1):
            lw = self.tc.log(rem)
            part = {wd: v for wd, v in lw.items() if len(wd) == w}
            coords = self.tc.to_lie(part)
            stage = self.identity().tensor
            for i in self.basis.weight_range(w):
                e = coords.coeffs.get(i, 0)
                if e:
                    e = Fraction(e)
                    if e.denominator != 1:
                        raise ValueError(
                            f"element is not integral: weight-{w} exponent {e} "
                            f"at basis index {i}"
                        )
                    exps[i] = int(e)
                    stage = self.tc.mul(
                        stage, self.tc.exp(t_scale(self.tc.from_lie(self.basic_log(i)), e))
                    )
            rem = self.tc.mul(self.tc.inverse(stage), rem)
        assert len(rem) == 1, "peeling left a nontrivial remainder"
        out = tuple(exps)
        x._nf = out
        return out

    def from_normal_form(self, exps) -> NilElement:
        exps = tuple(exps)
        if len(exps) > self.basis.dim:
            raise ValueError("exponent vector longer than the basis")
        t = dict(_ONE)
        for i, e in enumerate(exps):
            if e:
                t = self.tc.mul(
                    t, self.tc.exp(t_scale(self.tc.from_lie(self.basic_log(i)), e))
                )
        out = NilElement(self, t)
        out._nf = exps + (0,) * (self.basis.dim - len(exps))
        return out

    def nf_mul(self, nf1: tuple, nf2: tuple) -> tuple:
        """Product of two normal forms, memoized (bar-chain workhorse)."""
        key = (nf1, nf2)
        cached = self._nf_product.get(key)
        if cached is None:
            cached = self.normal_form(self.from_normal_form(nf1) * self.from_normal_form(nf2))
            with self._lock:
                self._nf_product[key] = cached
        return cached

    def section(self, x: NilElement) -> NilElement:
        """Zero-extension of the normal form: the canonical set-theoretic
        section Gamma_k -> Gamma_{k+1} of the central extension."""
        return self.up().from_normal_form(self.normal_form(x))

    def cocycle(self, g: NilElement, h: NilElement) -> LieElement:
        """c(g,h) = s(g) s(h) s(gh)^-1, a weight-k integral Lie element
        over the class-k basis (an element of the lattice L_{k+1})."""
        key = (self.normal_form(g), self.normal_form(h))
        cached = self._cocycle.get(key)
        if cached is not None:
            return cached
        up = self.up()
        sg, sh, sgh = self.section(g), self.section(h), self.section(g * h)
        t = up.tc.mul(up.tc.mul(sg.tensor, sh.tensor), up.tc.inverse(sgh.tensor))
        val = up.tc.to_lie(up.tc.log(t))
        assert val == val.weight_part(self.k), "cocycle not concentrated in weight k"
        assert val.is_integral(), "cocycle left the integral lattice"
        with self._lock:
            self._cocycle[key] = val
        return val

    # -- induced maps --------------------------------------------------------

    def fixes_generators(self, phi: Endomorphism) -> bool:
        return all(
            self.log_word(phi.images[i]) == self.log_word(generator(i + 1))
            for i in range(self.n)
        )

    def induced_lie_auto(self, phi: Endomorphism) -> tuple[LieElement, ...]:
        """Columns (by basis index) of the induced Lie algebra endomorphism.

        Letters go to the log of their image word; a bracket node goes to
        the bracket of its subtrees' images, so the result is the unique
        bracket-compatible extension.
        """
        cols: list[LieElement] = []
        for i in range(self.basis.dim):
            tree = self.basis.trees[i]
            if isinstance(tree, int):
                cols.append(self.log_word(phi.images[tree - 1]))
            else:
                l, r = self.basis.subtree_indices(i)
                cols.append(cols[l].bracket(cols[r]))
        return tuple(cols)

    def act_lie(self, cols: tuple[LieElement, ...], x: LieElement) -> LieElement:
        out = LieElement(self.basis, {})
        for i, v in x.coeffs.items():
            out = out + cols[i].scale(v)
        return out

    def __repr__(self) -> str:
        return f"MalcevContext(n={self.n}, k={self.k})"


_contexts: dict[tuple[int, int], MalcevContext] = {}
_ctx_lock = threading.Lock()


def get_context(n: int, k: int) -> MalcevContext:
    key = (n, k)
    ctx = _contexts.get(key)
    if ctx is None:
        with _ctx_lock:
            ctx = _contexts.get(key)
            if ctx is None:
                ctx = MalcevContext(n, k)
                _contexts[key] = ctx
    return ctx


# -- level-indexed conveniences mirroring the operation names ---------------


def log_word(w: Word, n: int, k: int) -> LieElement:
    return get_context(n, k).log_word(w)


def bch(x: LieElement, y: LieElement) -> LieElement:
    ctx = get_context(x.basis.n, x.basis.c + 1)
    return ctx.bch(x, y)


def is_in_torelli(phi: Endomorphism, k: int) -> bool:
    """Does phi act trivially on Gamma_k?  (Level-k Torelli membership.)"""
    return get_context(2 * phi.g, k).fixes_generators(phi)


def induced_lie_auto(phi: Endomorphism, k: int) -> tuple[LieElement, ...]:
    return get_context(2 * phi.g, k).induced_lie_auto(phi)


def act_lie(cols: tuple[LieElement, ...], x: LieElement) -> LieElement:
    """Apply columns of a Lie endomorphism to an element, linearly."""
    out = LieElement(x.basis, {})
    for i, v in x.coeffs.items():
        out = out + cols[i].scale(v)
    return out


class NilAutomorphism:
    """An automorphism of Gamma_k given by generator images.

    Applying it to an arbitrary element goes through the normal form:
    x = prod basic(i)^{e_i} maps to prod phi(basic(i))^{e_i}, where
    phi(basic(i)) substitutes the generator images into the commutator word.
    """

    __slots__ = ("ctx", "images", "_basic_cache")

    def __init__(self, ctx: MalcevContext, images):
        self.ctx = ctx
        self.images = tuple(images)
        if len(self.images) != ctx.n:
            raise ValueError(f"need {ctx.n} generator images")
        self._basic_cache: dict[int, NilElement] = {}

    @staticmethod
    def from_endo(ctx: MalcevContext, phi: Endomorphism) -> "NilAutomorphism":
        return NilAutomorphism(ctx, (ctx.element(im) for im in phi.images))

    def _image_of_basic(self, index: int) -> NilElement:
        cached = self._basic_cache.get(index)
        if cached is None:
            ctx = self.ctx
            cached = ctx.identity()
            for s in ctx.basic_word(index):
                im = self.images[abs(s) - 1]
                cached = cached * (im if s > 0 else im.inverse())
            self._basic_cache[index] = cached
        return cached

    def apply(self, x: NilElement) -> NilElement:
        if x.ctx is not self.ctx:
            raise ValueError("element belongs to a different context")
        out = self.ctx.identity()
        for i, e in enumerate(self.ctx.normal_form(x)):
            if e:
                out = out * self._image_of_basic(i) ** e
        return out

    def compose(self, other: "NilAutomorphism") -> "NilAutomorphism":
        if self.ctx is not other.ctx:
            raise ValueError("mixed contexts")
        return NilAutomorphism(self.ctx, (self.apply(im) for im in other.images))

    def is_identity(self) -> bool:
        return all(
            im == self.ctx.element(generator(i + 1))
            for i, im in enumerate(self.images)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NilAutomorphism):
            return NotImplemented
        return self.ctx is other.ctx and self.images == other.images
