"""Johnson and Morita homomorphisms at chain level, and their comparison.

For a mapping class phi acting trivially on Gamma_k, the k-th Johnson
value records the weight-k part of log(phi(x) x^-1) per generator; the
k-th Morita value is a bounding 3-chain pushed to Gamma_k together with
its cap against the central-extension cocycle.  The two sides meet in
Morita's theorem: johnson = symplectic_dual of the cap invariant, up to
two global signs (epsilon for the cap, delta for the duality) that are
calibrated once, on an abelian oracle and on a single instance, and then
frozen for every later verification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .bar import (
    BarChain,
    act_on_chain,
    antisym_cycle,
    bound_two_cycle,
    cap_d2,
    fundamental_two_chain,
    push,
)
from .ce import WedgeChain, extended_differential, read_h_tensor_l
from .hall import LieElement, get_basis
from .malcev import (
    NilAutomorphism,
    act_lie,
    get_context,
    induced_lie_auto,
)
from .words import MappingClassRep, Word, apply_endo, catalog, compose, h_action, word

__all__ = [
    "JohnsonValue",
    "MoritaValue",
    "Signs",
    "johnson",
    "johnson_act",
    "morita",
    "symplectic_dual",
    "verify_morita_johnson",
    "hom_to_aut",
    "read_aut_value",
    "crossed_check",
    "equivariance_check",
    "SemidirectElement",
    "calibrate_epsilon",
    "calibrate_delta",
    "jv_to_jsonable",
    "tensor_to_jsonable",
]


@dataclass(frozen=True)
class Signs:
    """The two calibrated global signs: epsilon scales the cap with the
    extension cocycle, delta scales the symplectic duality."""

    epsilon: int
    delta: int

    def __post_init__(self):
        if self.epsilon not in (1, -1) or self.delta not in (1, -1):
            raise ValueError("calibration signs must be +1 or -1")


class JohnsonValue:
    """Per-generator weight-k Lie elements: the value of the k-th Johnson
    homomorphism as an element of Hom(H, weight-k layer)."""

    __slots__ = ("k", "values")

    def __init__(self, k: int, values: tuple[LieElement, ...]):
        self.k = k
        self.values = values

    def __add__(self, other: "JohnsonValue") -> "JohnsonValue":
        if self.k != other.k:
            raise ValueError("mixed levels")
        return JohnsonValue(
            self.k, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other: "JohnsonValue") -> "JohnsonValue":
        if self.k != other.k:
            raise ValueError("mixed levels")
        return JohnsonValue(
            self.k, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, JohnsonValue):
            return NotImplemented
        return self.k == other.k and all(
            a == b for a, b in zip(self.values, other.values)
        )

    def is_zero(self) -> bool:
        return all(not v.coeffs for v in self.values)

    def __repr__(self) -> str:
        return f"JohnsonValue(k={self.k}, {self.values!r})"


class MoritaValue:
    """A chain-level Morita value: a 3-cycle over Gamma_k plus its cap
    against the extension cocycle (one weight-k Lie element per
    generator slot)."""

    __slots__ = ("k", "cycle", "d2_invariant")

    def __init__(self, k: int, cycle: BarChain, d2_invariant: tuple[LieElement, ...]):
        self.k = k
        self.cycle = cycle
        self.d2_invariant = d2_invariant


def _difference_words(phi: MappingClassRep) -> list[Word]:
    out = []
    for i in range(1, 2 * phi.g + 1):
        x = word([i])
        out.append(apply_endo(phi, x) * ~x)
    return out


def johnson(phi: MappingClassRep, k: int) -> JohnsonValue:
    """The k-th Johnson value of phi: generator x maps to the weight-k
    part of log(phi(x) x^-1) computed one level up, at Gamma_{k+1}.

    Requires phi to act trivially on Gamma_k; the offending generator is
    named otherwise.  Values are integral.
    """
    ctx = get_context(2 * phi.g, k + 1)
    values = []
    for i, diff in enumerate(_difference_words(phi)):
        lw = ctx.log_word(diff)
        if lw.coeffs and lw.min_weight() < k:
            from .words import generator_name

            raise ValueError(
                f"mapping class is not in the level-{k} Torelli group: "
                f"log(phi(x) x^-1) has weight-{lw.min_weight()} terms "
                f"at generator {generator_name(i + 1)}"
            )
        v = lw.weight_part(k)
        assert v.is_integral(), "Johnson value must be integral"
        values.append(v)
    return JohnsonValue(k, tuple(values))


def johnson_act(alpha: MappingClassRep, t: JohnsonValue, k: int) -> JohnsonValue:
    """The mapping-class action on Hom(H, weight-k layer): twist the H
    slot by the inverse abelianization matrix and the value slot by the
    induced Lie automorphism one level up."""
    n = 2 * alpha.g
    a_inv = h_action(alpha.inverse())
    cols = induced_lie_auto(alpha, k + 1)
    basis = t.values[0].basis
    out = []
    for j in range(n):
        acc = LieElement(basis, {})
        for i in range(n):
            cij = a_inv[i][j]
            if cij:
                acc = acc + t.values[i].scale(cij)
        out.append(act_lie(cols, acc))
    return JohnsonValue(k, tuple(out))


def morita(phi: MappingClassRep, k: int, epsilon: int) -> MoritaValue:
    """The chain-level k-th Morita value of phi: bound phi.C - C over the
    free group, push the bounding 3-chain to Gamma_k (a cycle, exactly,
    because phi acts trivially there), and cap with the extension
    cocycle using the calibrated sign."""
    johnson(phi, k)  # reuses the precondition check, error message and all
    ctx = get_context(2 * phi.g, k)
    c2 = fundamental_two_chain(phi.g)
    z = act_on_chain(phi, c2) - c2
    d3 = bound_two_cycle(z)
    cycle = push(d3, ctx)
    from .bar import bar_boundary

    assert not bar_boundary(cycle), "pushed bounding chain must be a cycle"
    return MoritaValue(k, cycle, cap_d2(cycle, epsilon))


def symplectic_dual(
    t: tuple[LieElement, ...], delta: int, k: int | None = None
) -> JohnsonValue:
    """Apply duality H -> H* from the intersection pairing <a_i, b_i> = 1
    to the H slot of a tensor in H (x) L: the a_i slot contributes
    -delta at b_i and the b_i slot contributes +delta at a_i."""
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    n = len(t)
    if n % 2:
        raise ValueError("tensor needs one slot per generator, 2g of them")
    basis = t[0].basis
    if k is None:
        k = basis.c
    out: list[LieElement] = [LieElement(basis, {})] * n
    for m in range(n // 2):
        ai, bi = 2 * m, 2 * m + 1
        out[ai] = t[bi].scale(-delta)
        out[bi] = t[ai].scale(delta)
    return JohnsonValue(k, tuple(out))


def verify_morita_johnson(phi: MappingClassRep, k: int, signs: Signs):
    """Check johnson(phi, k) == symplectic_dual(cap of morita(phi, k)).

    Returns (ok, report); the report lists the per-generator difference
    when the check fails.
    """
    jv = johnson(phi, k)
    mv = morita(phi, k, signs.epsilon)
    dual = symplectic_dual(mv.d2_invariant, signs.delta, k)
    diff = jv - dual
    ok = diff.is_zero()
    report = {
        "ok": ok,
        "mapping_class": phi.name,
        "k": k,
        "cycle_terms": len(mv.cycle),
    }
    if not ok:
        from .words import generator_name

        report["difference"] = {
            generator_name(i + 1): {
                jv.values[0].basis.name(j): str(c) for j, c in v.coeffs.items()
            }
            for i, v in enumerate(diff.values)
            if v.coeffs
        }
    return ok, report


def hom_to_aut(t: JohnsonValue, g: int) -> NilAutomorphism:
    """Turn an integral Hom(H, weight-k) value into the automorphism of
    Gamma_{k+1} sending x to x * exp(t(x)); it projects to the identity
    of Gamma_k, and addition of values matches composition."""
    k = t.k
    ctx = get_context(2 * g, k + 1)
    images = []
    for i, v in enumerate(t.values):
        assert v.is_integral(), "only integral values give lattice automorphisms"
        x = ctx.element(word([i + 1]))
        images.append(x * ctx.exp_lie(v))
    return NilAutomorphism(ctx, tuple(images))


def read_aut_value(auto: NilAutomorphism) -> JohnsonValue:
    """Inverse of hom_to_aut on its image: read off log(phi(x) x^-1)."""
    ctx = auto.ctx
    k = ctx.k - 1
    values = []
    for i, img in enumerate(auto.images):
        diff = img * ctx.element(word([i + 1])).inverse()
        lw = diff.log
        if lw.coeffs and lw.min_weight() < k:
            raise ValueError(
                "automorphism does not project to the identity one level down"
            )
        values.append(lw.weight_part(k))
    return JohnsonValue(k, tuple(values))


def crossed_check(elements, f, action, multiply, add) -> dict:
    """Verify the crossed-homomorphism law f(gh) = g.f(h) + f(g) on all
    evaluable pairs from `elements`.

    f maps element keys to module values; action(g, v) twists a value;
    multiply(g, h) returns the key of gh, or None when the product is
    not among the samples; add combines module values.  Pairs whose
    product is unknown are skipped and counted.
    """
    checked = 0
    skipped = 0
    failures = []
    for g in elements:
        for h in elements:
            gh = multiply(g, h)
            if gh is None or gh not in f:
                skipped += 1
                continue
            lhs = f[gh]
            rhs = add(action(g, f[h]), f[g])
            checked += 1
            if lhs != rhs:
                failures.append((g, h))
    return {
        "ok": not failures,
        "checked": checked,
        "skipped": skipped,
        "failures": failures,
    }


def equivariance_check(alpha: MappingClassRep, phi: MappingClassRep, k: int) -> bool:
    """johnson(alpha phi alpha^-1, k) must equal the alpha-twist of
    johnson(phi, k)."""
    conj = compose(compose(alpha, phi), alpha.inverse())
    return johnson(conj, k) == johnson_act(alpha, johnson(phi, k), k)


class SemidirectElement:
    """Element of (mapping classes mod level-k Torelli) acting on
    Hom(H, weight-k layer): a coset witness plus a module value, with
    (alpha, v)(beta, w) = (alpha beta, alpha.w + v)."""

    __slots__ = ("rep", "value", "k")

    def __init__(self, rep: MappingClassRep, value: JohnsonValue, k: int):
        self.rep = rep
        self.value = value
        self.k = k

    def __mul__(self, other: "SemidirectElement") -> "SemidirectElement":
        if self.k != other.k:
            raise ValueError("mixed levels")
        return SemidirectElement(
            compose(self.rep, other.rep),
            johnson_act(self.rep, other.value, self.k) + self.value,
            self.k,
        )

    def inverse(self) -> "SemidirectElement":
        inv = self.rep.inverse()
        zero = JohnsonValue(
            self.k, tuple(LieElement(v.basis, {}) for v in self.value.values)
        )
        minus = zero - self.value
        return SemidirectElement(inv, johnson_act(inv, minus, self.k), self.k)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SemidirectElement):
            return NotImplemented
        if self.k != other.k or self.value != other.value:
            return False
        # coset part compared through its induced action at level k
        return induced_lie_auto(self.rep, self.k) == induced_lie_auto(
            other.rep, self.k
        )


# -- calibration --------------------------------------------------------------


def _wedge_of_abelian(ctx, elts) -> WedgeChain:
    """Trilinear expansion of the wedge of abelianized group elements."""
    vecs = [e.log.weight_part(1).coeffs for e in elts]
    terms: dict[tuple[int, ...], object] = {}
    for i, ci in vecs[0].items():
        for j, cj in vecs[1].items():
            for l, cl in vecs[2].items():
                tup = (i, j, l)
                terms[tup] = terms.get(tup, 0) + ci * cj * cl
    return WedgeChain(ctx.basis, 3, terms)


def calibrate_epsilon(g: int = 2, seed: int = 0, trials: int = 20) -> int:
    """Fix the cap sign on the abelian oracle: over Gamma_2 the cap of an
    antisymmetrized cycle must match reading the extended differential
    of the corresponding wedge, for every generator triple and a batch
    of random integer combinations, with one global sign."""
    n = 2 * g
    ctx = get_context(n, 2)
    rng = random.Random(seed)
    cases = []
    for triple in combinations(range(1, n + 1), 3):
        cases.append([ctx.element(word([i])) for i in triple])
    for _ in range(trials):
        cases.append(
            [
                ctx.element(
                    word(
                        [
                            s
                            for i in range(1, n + 1)
                            for s in [i] * rng.randint(0, 2) + [-i] * rng.randint(0, 1)
                        ]
                    )
                )
                for _ in range(3)
            ]
        )
    plus_ok = minus_ok = True
    for elts in cases:
        got = cap_d2(antisym_cycle(*elts), 1)
        wedge = _wedge_of_abelian(ctx, elts)
        want = read_h_tensor_l(extended_differential(wedge, 2), 2)
        if any(a != b for a, b in zip(got, want)):
            plus_ok = False
        if any(a.scale(-1) != b for a, b in zip(got, want)):
            minus_ok = False
        if not plus_ok and not minus_ok:
            raise RuntimeError(
                "no global sign reconciles the cap with the extended differential"
            )
    if plus_ok and minus_ok:
        raise RuntimeError("calibration cases were all degenerate")
    return 1 if plus_ok else -1


def calibrate_delta(epsilon: int, g: int = 2) -> int:
    """Fix the duality sign on a single level-3 instance (the boundary
    conjugation), after epsilon is known."""
    phi = catalog(g)["conj_l"]
    jv = johnson(phi, 3)
    mv = morita(phi, 3, epsilon)
    for delta in (1, -1):
        if symplectic_dual(mv.d2_invariant, delta, 3) == jv:
            return delta
    raise RuntimeError("no duality sign reconciles the level-3 instance")


# -- serialization helpers -----------------------------------------------------


def tensor_to_jsonable(t: tuple[LieElement, ...]) -> dict:
    from .words import generator_name

    out = {}
    for i, v in enumerate(t):
        basis = v.basis
        out[generator_name(i + 1)] = {
            basis.name(j): str(c) for j, c in sorted(v.coeffs.items())
        }
    return out


def jv_to_jsonable(t: JohnsonValue) -> dict:
    return {"k": t.k, "values": tensor_to_jsonable(t.values)}
