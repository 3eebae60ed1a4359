"""Nilpotent truncations: group law, normal forms, cocycles, induced maps."""

import random
from fractions import Fraction

import pytest

from torelli.words import Word, word, generator, commutator, catalog
from torelli.hall import lie_generator, lie_from_items
from torelli.malcev import (
    get_context,
    log_word,
    bch,
    is_in_torelli,
    induced_lie_auto,
    act_lie,
    NilAutomorphism,
)

rng = random.Random(16180339)


def random_word(n, max_len=8):
    length = rng.randint(1, max_len)
    letters = []
    for _ in range(length):
        s = rng.randint(1, n)
        letters.append(s if rng.random() < 0.5 else -s)
    return Word.make(letters)


def test_log_of_commutator_class3():
    ctx = get_context(2, 4)
    lw = ctx.log_word(commutator(generator(1), generator(2)))
    by_foliage = {ctx.basis.foliage(i): v for i, v in lw.coeffs.items()}
    assert by_foliage == {
        (1, 2): 1,
        (1, 1, 2): Fraction(1, 2),
        (1, 2, 2): Fraction(-1, 2),
    }


def test_bch_class2_closed_form():
    ctx = get_context(3, 3)
    x = lie_from_items(ctx.basis, [(0, 2), (1, -1)])
    y = lie_from_items(ctx.basis, [(1, 3), (2, 1)])
    expected = x + y + x.bracket(y).scale(Fraction(1, 2))
    assert ctx.bch(x, y) == expected
    assert bch(x, y) == expected


def test_element_is_multiplicative():
    ctx = get_context(4, 4)
    for _ in range(30):
        u, v = random_word(4), random_word(4)
        assert ctx.element(u) * ctx.element(v) == ctx.element(u * v)


def test_log_word_on_letters():
    ctx = get_context(3, 4)
    for i in range(1, 4):
        assert ctx.log_word(generator(i)) == lie_generator(ctx.basis, i)
        assert log_word(generator(i), 3, 4) == lie_generator(ctx.basis, i)


def test_group_axioms():
    ctx = get_context(4, 4)
    e = ctx.identity()
    for _ in range(20):
        x = ctx.element(random_word(4))
        y = ctx.element(random_word(4))
        z = ctx.element(random_word(4))
        assert (x * y) * z == x * (y * z)
        assert x * x.inverse() == e
        assert x.inverse() * x == e
        assert x * e == x and e * x == x
    x = ctx.element(random_word(4))
    assert x ** 3 == x * x * x
    assert x ** -2 == (x.inverse()) ** 2
    assert x ** 0 == e


def test_normal_form_round_trip():
    ctx = get_context(4, 3)
    for _ in range(20):
        w = random_word(4)
        x = ctx.element(w)
        nf = ctx.normal_form(x)
        assert all(isinstance(e, int) for e in nf)
        assert ctx.from_normal_form(nf) == x
    # fresh elements built as honest commutator-word products, so the
    # peeling is exercised rather than read back from a cache
    for _ in range(10):
        exps = [rng.randint(-2, 2) for _ in range(ctx.basis.dim)]
        w = Word.make(())
        for i, e in enumerate(exps):
            if e:
                w = w * ctx.basic_word(i) ** e
        assert list(ctx.normal_form(ctx.element(w))) == exps


def test_normal_form_rejects_rational_points():
    ctx = get_context(2, 3)
    half = ctx.exp_lie(lie_generator(ctx.basis, 1).scale(Fraction(1, 2)))
    with pytest.raises(ValueError):
        ctx.normal_form(half)


def test_nf_mul_matches_group_product():
    ctx = get_context(4, 3)
    for _ in range(15):
        x = ctx.element(random_word(4))
        y = ctx.element(random_word(4))
        assert ctx.nf_mul(ctx.normal_form(x), ctx.normal_form(y)) == ctx.normal_form(
            x * y
        )


def test_project_section_round_trip():
    ctx = get_context(4, 3)
    for _ in range(15):
        w = random_word(4)
        x = ctx.element(w)
        assert ctx.project(ctx.section(x)) == x
        assert ctx.project(ctx.up().element(w)) == x


def test_cocycle_identity():
    # c(g,h) + c(gh,m) = c(h,m) + c(g,hm): both sides measure the failure
    # of the section over a triple product
    for k in (2, 3):
        ctx = get_context(4, k)
        for _ in range(10):
            g = ctx.element(random_word(4))
            h = ctx.element(random_word(4))
            m = ctx.element(random_word(4))
            lhs = ctx.cocycle(g, h) + ctx.cocycle(g * h, m)
            rhs = ctx.cocycle(h, m) + ctx.cocycle(g, h * m)
            assert lhs == rhs


def test_cocycle_weight_and_integrality():
    ctx = get_context(4, 3)
    for _ in range(10):
        c = ctx.cocycle(ctx.element(random_word(4)), ctx.element(random_word(4)))
        assert c == c.weight_part(3)
        assert c.is_integral()


def test_cocycle_abelian_closed_form():
    # over the abelianized group the section is x1^e1 ... xn^en, and
    # collecting s(g)s(h) gives c(g,h) = -sum_{i<j} g_j h_i [X_i, X_j]
    ctx = get_context(4, 2)
    up = ctx.up()
    for _ in range(10):
        ge = [rng.randint(-3, 3) for _ in range(4)]
        he = [rng.randint(-3, 3) for _ in range(4)]
        items: dict[int, int] = {}
        for i in range(4):
            for j in range(i + 1, 4):
                for idx, cf in up.basis.bracket_indices(i, j).items():
                    items[idx] = items.get(idx, 0) - ge[j] * he[i] * cf
        got = ctx.cocycle(ctx.from_normal_form(ge), ctx.from_normal_form(he))
        assert got == lie_from_items(up.basis, items.items())


def test_cocycle_antisymmetrization_is_bracket():
    ctx = get_context(4, 2)
    up = ctx.up()
    for _ in range(10):
        g = ctx.element(random_word(4))
        h = ctx.element(random_word(4))
        glog = ctx.tc.to_lie(ctx.tc.log(g.tensor)).lift_to(up.basis)
        hlog = ctx.tc.to_lie(ctx.tc.log(h.tensor)).lift_to(up.basis)
        assert ctx.cocycle(g, h) - ctx.cocycle(h, g) == glog.bracket(hlog)


def test_torelli_membership():
    cat = catalog(2)
    assert not is_in_torelli(cat["t1"], 2)
    for name in ("conj_l", "sep1"):
        phi = cat[name]
        assert is_in_torelli(phi, 2)
        assert is_in_torelli(phi, 3)
        assert not is_in_torelli(phi, 4)


def test_induced_lie_auto_respects_brackets():
    ctx = get_context(4, 4)
    cols = ctx.induced_lie_auto(catalog(2)["t1"])
    for _ in range(15):
        i = rng.randrange(ctx.basis.dims[0] + ctx.basis.dims[1])
        j = rng.randrange(ctx.basis.dims[0])
        x = lie_from_items(ctx.basis, [(i, rng.randint(-2, 2))])
        y = lie_from_items(ctx.basis, [(j, rng.randint(-2, 2))])
        lhs = act_lie(cols, x.bracket(y))
        rhs = act_lie(cols, x).bracket(act_lie(cols, y))
        assert lhs == rhs


def test_induced_lie_auto_trivial_on_torelli():
    cols = induced_lie_auto(catalog(2)["conj_l"], 3)
    basis = cols[0].basis
    for i, col in enumerate(cols):
        assert col == lie_from_items(basis, [(i, 1)])


def test_nil_automorphism_matches_word_substitution():
    ctx = get_context(4, 4)
    phi = catalog(2)["t1"]
    auto = NilAutomorphism.from_endo(ctx, phi)
    for _ in range(10):
        w = random_word(4, max_len=6)
        assert auto.apply(ctx.element(w)) == ctx.element(phi(w))
    psi = catalog(2)["sep1"]
    comp = auto.compose(NilAutomorphism.from_endo(ctx, psi))
    for _ in range(5):
        w = random_word(4, max_len=5)
        assert comp.apply(ctx.element(w)) == ctx.element(phi(psi(w)))


def test_nil_automorphism_identity_check():
    ctx = get_context(4, 3)
    auto = NilAutomorphism.from_endo(ctx, catalog(2)["conj_l"])
    assert auto.is_identity()
    other = NilAutomorphism.from_endo(ctx, catalog(2)["t1"])
    assert not other.is_identity()
