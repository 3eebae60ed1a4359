"""Truncated free associative algebra: the computational home of BCH.

Elements are sparse dicts {word: coefficient} where a word is a tuple of
letters (1-based ints) and products are truncated above a fixed total
weight c.  Group elements live here as truncated exponentials (constant
term 1), Lie elements as primitives (no constant term, weight-graded).

Two independent routes express a primitive tensor in the Hall basis: a
per-weight linear solve against the tensor images of the Hall elements
(the working route), and the Dynkin right-normed bracketing map divided
by the weight (kept as a cross-check).
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

from .hall import HallBasis, LieElement

__all__ = ["TensorContext"]

Word_ = tuple  # tuple of 1-based letters
Tensor = dict  # Word_ -> int | Fraction

_ONE: Tensor = {(): 1}


def t_add(a: Tensor, b: Tensor) -> Tensor:
    out = dict(a)
    for w, v in b.items():
        nv = out.get(w, 0) + v
        if nv:
            out[w] = nv
        elif w in out:
            del out[w]
    return out


def t_scale(a: Tensor, q) -> Tensor:
    if not q:
        return {}
    return {w: v * q for w, v in a.items()}


class TensorContext:
    """Tensor-algebra arithmetic truncated at the class of a Hall basis."""

    def __init__(self, basis: HallBasis):
        self.basis = basis
        self.c = basis.c
        self.n = basis.n
        self._hall_images: dict[int, Tensor] = {}
        self._solvers: dict[int, list] = {}
        self._lock = threading.RLock()

    # -- algebra ----------------------------------------------------------

    def mul(self, a: Tensor, b: Tensor) -> Tensor:
        c = self.c
        out: Tensor = {}
        for wa, va in a.items():
            room = c - len(wa)
            for wb, vb in b.items():
                if len(wb) > room:
                    continue
                w = wa + wb
                nv = out.get(w, 0) + va * vb
                if nv:
                    out[w] = nv
                elif w in out:
                    del out[w]
        return out

    def exp(self, x: Tensor) -> Tensor:
        if () in x:
            raise ValueError("exp needs zero constant term")
        out: Tensor = dict(_ONE)
        pw: Tensor = dict(_ONE)
        for m in range(1, self.c + 1):
            pw = self.mul(pw, x)
            if not pw:
                break
            out = t_add(out, t_scale(pw, Fraction(1, factorial(m))))
        return out

    def log(self, p: Tensor) -> Tensor:
        if p.get((), 0) != 1:
            raise ValueError("log needs constant term 1")
        u = {w: v for w, v in p.items() if w != ()}
        out: Tensor = {}
        pw: Tensor = dict(_ONE)
        for m in range(1, self.c + 1):
            pw = self.mul(pw, u)
            if not pw:
                break
            sign = 1 if m % 2 == 1 else -1
            out = t_add(out, t_scale(pw, Fraction(sign, m)))
        return out

    def inverse(self, p: Tensor) -> Tensor:
        """Multiplicative inverse of an element with constant term 1."""
        if p.get((), 0) != 1:
            raise ValueError("inverse needs constant term 1")
        u = {w: -v for w, v in p.items() if w != ()}
        out: Tensor = dict(_ONE)
        pw: Tensor = dict(_ONE)
        for _ in range(self.c):
            pw = self.mul(pw, u)
            if not pw:
                break
            out = t_add(out, pw)
        return out

    def generator(self, letter: int) -> Tensor:
        if not 1 <= letter <= self.n:
            raise ValueError(f"letter {letter} out of range")
        return {(letter,): 1}

    # -- Hall basis <-> tensors --------------------------------------------

    def hall_image(self, index: int) -> Tensor:
        im = self._hall_images.get(index)
        if im is not None:
            return im
        with self._lock:
            im = self._hall_images.get(index)
            if im is not None:
                return im
            tree = self.basis.trees[index]
            if isinstance(tree, int):
                im = {(tree,): 1}
            else:
                l, r = self.basis.subtree_indices(index)
                a, b = self.hall_image(l), self.hall_image(r)
                im = t_add(self.mul(a, b), t_scale(self.mul(b, a), -1))
            self._hall_images[index] = im
            return im

    def from_lie(self, elt: LieElement) -> Tensor:
        if elt.basis is not self.basis and (elt.basis.n, elt.basis.c) != (self.n, self.c):
            raise ValueError("element belongs to a different truncation")
        out: Tensor = {}
        for i, v in elt.coeffs.items():
            out = t_add(out, t_scale(self.hall_image(i), v))
        return out

    def _solver(self, w: int) -> list:
        """Gauss-Jordan pivots for the weight-w span of Hall images.

        Each pivot is (word, vector, combo): vector has coefficient 1 at
        word and 0 at every other pivot word; combo expresses vector in
        terms of the original Hall images {index: coefficient}.
        """
        cached = self._solvers.get(w)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._solvers.get(w)
            if cached is not None:
                return cached
            pivots: list = []
            for i in self.basis.weight_range(w):
                vec = {wd: Fraction(v) for wd, v in self.hall_image(i).items()}
                combo = {i: Fraction(1)}
                for pw, pvec, pcombo in pivots:
                    cf = vec.get(pw)
                    if cf:
                        _sub_into(vec, pvec, cf)
                        _sub_into(combo, pcombo, cf)
                assert vec, f"Hall image {i} dependent on earlier ones"
                pw = min(vec)
                inv = 1 / vec[pw]
                vec = {k: v * inv for k, v in vec.items()}
                combo = {k: v * inv for k, v in combo.items()}
                for opw, ovec, ocombo in pivots:
                    cf = ovec.get(pw)
                    if cf:
                        _sub_into(ovec, vec, cf)
                        _sub_into(ocombo, combo, cf)
                pivots.append((pw, vec, combo))
            self._solvers[w] = pivots
            return pivots

    def to_lie(self, t: Tensor) -> LieElement:
        """Hall coordinates of a primitive (Lie) tensor; rejects non-Lie input."""
        if () in t:
            raise ValueError("not a Lie element: constant term present")
        coeffs: dict[int, Fraction] = {}
        by_weight: dict[int, Tensor] = {}
        for wd, v in t.items():
            by_weight.setdefault(len(wd), {})[wd] = v
        for w, part in sorted(by_weight.items()):
            residual = {wd: Fraction(v) for wd, v in part.items()}
            for pw, pvec, pcombo in self._solver(w):
                cf = residual.get(pw)
                if cf:
                    _sub_into(residual, pvec, cf)
                    for i, cv in pcombo.items():
                        nv = coeffs.get(i, 0) + cf * cv
                        if nv:
                            coeffs[i] = nv
                        elif i in coeffs:
                            del coeffs[i]
            if residual:
                raise ValueError(
                    f"not a Lie element: weight-{w} part outside the Hall span"
                )
        return LieElement(self.basis, coeffs)

    def to_lie_dynkin(self, t: Tensor) -> LieElement:
        """Dynkin projection: word -> right-normed bracketing / weight.

        Agrees with to_lie exactly on Lie elements; an independent route.
        """
        if () in t:
            raise ValueError("not a Lie element: constant term present")
        basis = self.basis
        out = LieElement(basis, {})
        for wd, v in t.items():
            cur = LieElement(basis, {wd[-1] - 1: Fraction(v, len(wd))})
            for letter in reversed(wd[:-1]):
                cur = LieElement(basis, {letter - 1: 1}).bracket(cur)
            out = out + cur
        return out


def _sub_into(target: dict, src: dict, factor) -> None:
    for k, v in src.items():
        nv = target.get(k, 0) - factor * v
        if nv:
            target[k] = nv
        elif k in target:
            del target[k]
