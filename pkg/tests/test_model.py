"""Relational-model matrices, combinators and interpretation."""

from fractions import Fraction

import pytest

from tropcalc.series import MultiDegree, TropSeries
from tropcalc.values import INF
from tropcalc.terms import Arrow, GradedArrow, NAT, O, parse
from tropcalc.model import (
    ArrowSet,
    Caps,
    NatSet,
    SumSet,
    TropMatrix,
    UnitSet,
    ZERO_SERIES,
    bag_add,
    bag_splits,
    bags_upto,
    check_boolean,
    curry,
    diff_op,
    ev,
    identity,
    interpret,
    kleisli_compose,
    matrix_apply,
    sub_bags,
    uncurry,
)

STAR = "*"
ID_PT = ("=>", (STAR,), STAR)


# ------------------------------------------------------------------- bags


def test_bag_helpers():
    assert bag_add((1, 3), (2,)) == (1, 2, 3)
    assert ((), (1, 2)) in sub_bags((1, 2))
    assert ((1,), (2,)) in sub_bags((1, 2))
    assert len(bags_upto([STAR], 3)) == 4
    parts = bag_splits((1, 1, 2), 2)
    assert ((1, 1), (2,)) in parts
    assert all(bag_add(*p) == (1, 1, 2) for p in parts)


# -------------------------------------------------------------- composition


def brute_compose_entry(s, t, mu, c, ys, kmax):
    import itertools

    best = TropSeries.empty()
    for k in range(kmax + 1):
        for parts in bag_splits(mu, k):
            for bs in itertools.product(ys, repeat=k):
                rho = tuple(sorted(bs))
                acc = s.entry(rho, c)
                for part, b in zip(parts, bs):
                    acc = acc.tmul(t.entry(part, b))
            # note: all orderings enumerated; duplicates collapse under min
                best = best.tmin(acc)
    return best


def test_compose_example():
    X, Y, Z = UnitSet(), NatSet(0), NatSet(1)
    a, y, z = STAR, 0, 1
    t = TropMatrix.from_entries(X, Y, {((a,), y): Fraction(1), ((a, a), y): Fraction(0)})
    s = TropMatrix.from_entries(Y, Z, {((y,), z): Fraction(2), ((y, y), z): Fraction(0)})
    st = kleisli_compose(s, t)
    assert st.entry((a, a), z).constant_value() == 2
    assert st.entry((a, a), z) == brute_compose_entry(s, t, (a, a), z, Y.points(), 4)


def test_compose_identity_and_empty():
    X = NatSet(2)
    t = TropMatrix.from_entries(X, X, {((0,), 1): Fraction(3), ((1, 2), 0): Fraction(1)})
    left = kleisli_compose(identity(X), t)
    right = kleisli_compose(t, identity(X))
    for bag in X.bags(2):
        for b in X.points():
            assert left.entry(bag, b) == t.entry(bag, b)
            assert right.entry(bag, b) == t.entry(bag, b)
    e = TropMatrix.empty(X, X)
    comp = kleisli_compose(e, t)
    assert all(comp.entry(bag, b).is_empty for bag in X.bags(2) for b in X.points())


# ------------------------------------------------------------------ ev/curry


def test_ev_entries():
    e = ev(UnitSet(), UnitSet(), 3)
    # rho = empty: the function point alone
    assert e.entry((("@", 0, ("=>", (), STAR)),), STAR) == ZERO_SERIES
    # rho = [*]: function point expecting one argument, plus that argument
    bag = (("@", 0, ID_PT), ("@", 1, STAR))
    assert e.entry(bag, STAR) == ZERO_SERIES
    # missing the argument
    assert e.entry((("@", 0, ID_PT),), STAR).is_empty


def test_curry_uncurry_roundtrip():
    X, A, B = NatSet(1), UnitSet(), NatSet(1)
    dom = SumSet((X, A))
    f = TropMatrix.from_entries(
        dom,
        B,
        {
            ((("@", 0, 0), ("@", 1, STAR)), 1): Fraction(2),
            ((("@", 1, STAR),), 0): Fraction(1),
        },
    )
    g = uncurry(curry(f, k=3))
    for bag, b, s in f.stored_entries():
        assert g.entry(bag, b) == s
    assert g.entry((("@", 0, 0),), 1).is_empty


# ------------------------------------------------------------------- diff_op


def test_diff_op():
    X = UnitSet()
    t = TropMatrix.from_entries(X, NatSet(0), {((STAR, STAR), 0): Fraction(0)})
    d = diff_op(t)
    assert d.entry((("@", 0, STAR), ("@", 1, STAR)), 0) == ZERO_SERIES
    # the linear slot must hold exactly one element
    assert d.entry((("@", 0, STAR), ("@", 0, STAR)), 0).is_empty
    de = diff_op(TropMatrix.empty(X, NatSet(0)))
    assert de.entry((("@", 1, STAR),), 0).is_empty


# ------------------------------------------------------------- interpretation


def test_identity_term():
    m = interpret(parse("\\x:o. x"), [], "stlc")
    assert m.entry((), ID_PT) == ZERO_SERIES
    assert m.entry((), ("=>", (), STAR)).is_empty
    assert check_boolean(m)


ZXX_CTX = [("x", O), ("z", Arrow(O, Arrow(O, O)))]


def zpoint(n, np):
    return ("=>", (STAR,) * n, ("=>", (STAR,) * np, STAR))


def test_zxx_entries():
    m = interpret(parse("z x x"), ZXX_CTX, "stlc")
    for n in range(5):
        for np in range(5 - n):
            bag = tuple(sorted((("@", 0, STAR),) * (n + np) + (("@", 1, zpoint(n, np)),)))
            assert m.entry(bag, STAR) == ZERO_SERIES, (n, np)
    # wrong multiplicity of x
    bad = (("@", 0, STAR), ("@", 1, zpoint(1, 1)))
    assert m.entry(bad, STAR).is_empty
    assert check_boolean(m)


def test_beta_invariance():
    pairs = [
        ("(\\x:o. x) y", "y", [("y", O)]),
        ("(\\f:o->o. f y) g", "g y", [("y", O), ("g", Arrow(O, O))]),
        ("(\\x:o. z x x) y", "z y y", ZXX_CTX[1:] + [("y", O)]),
    ]
    for redex, reduct, ctx in pairs:
        a = interpret(parse(redex), ctx, "stlc")
        b = interpret(parse(reduct), ctx, "stlc")
        dom = a.dom
        for bag in dom.bags(2):
            for pt in a.cod.points():
                assert a.entry(bag, pt) == b.entry(bag, pt), (redex, bag, pt)


def test_discreteness_stlc_bstlc():
    samples = [
        ("\\x:o. x", [], "stlc"),
        ("z x x", ZXX_CTX, "stlc"),
        ("\\f:o->o. \\x:o. f (f x)", [], "stlc"),
    ]
    for src, ctx, dialect in samples:
        m = interpret(parse(src, dialect), ctx, dialect, Caps(k_max=2))
        for bag in m.dom.bags(2):
            for pt in m.cod.points():
                m.entry(bag, pt)
        assert check_boolean(m)


def test_bstlc_graded_interpretation():
    zt = GradedArrow(1, O, GradedArrow(1, O, O))
    m = interpret(parse("\\x:o. z x x", "bstlc"), [("z", 1, zt)], "bstlc")
    # the inferred grade on x is 2, so the arrow slot holds bags of size <= 2
    pt = ("=>", (STAR, STAR), STAR)
    fnpt = ("=>", (STAR,), ("=>", (STAR,), STAR))
    bag = (("@", 0, fnpt),)
    assert m.entry(bag, pt) == ZERO_SERIES
    # a bag exceeding the grade is outside the denotation
    over = ("=>", (STAR, STAR, STAR), STAR)
    assert m.entry(bag, over).is_empty


# --------------------------------------------------------------- pcfl terms


def test_weighted_sum_of_numerals():
    m = interpret(parse("2 . 3 + 1 . 5", "pcfl"), [], "pcfl")
    assert m.entry((), 3).constant_value() == 2
    assert m.entry((), 5).constant_value() == 1
    assert m.entry((), 4).is_empty
    assert not check_boolean(m)


def test_scalar_symbolic():
    m = interpret(parse("a . 3", "pcfl"), [], "pcfl")
    assert m.entry((), 3) == TropSeries.parameter("a")


def test_succ_pred_ifz():
    m = interpret(parse("succ 3", "pcfl"), [], "pcfl")
    assert m.entry((), 4) == ZERO_SERIES and m.entry((), 3).is_empty
    p = interpret(parse("pred 0", "pcfl"), [], "pcfl")
    assert p.entry((), 0) == ZERO_SERIES
    i = interpret(parse("ifz 0 1 2", "pcfl"), [], "pcfl")
    assert i.entry((), 1) == ZERO_SERIES and i.entry((), 2).is_empty
    j = interpret(parse("ifz 7 1 2", "pcfl"), [], "pcfl")
    assert j.entry((), 2) == ZERO_SERIES and j.entry((), 1).is_empty


def test_fix_collapse():
    # Y (\x. True (+p) x): after one unfolding the True branch wins with
    # weight p; further unfoldings only add dominated monomials
    m = interpret(parse("Y (\\x:Nat. 0 (+p) x)", "pcfl"), [], "pcfl", Caps(f_max=4))
    s = m.entry((), 0)
    assert s.truncate(Fraction(1, 100)) == TropSeries.parameter("p")


def test_fix_needs_iterations():
    m = interpret(parse("Y (\\x:Nat. 0 (+p) x)", "pcfl"), [], "pcfl", Caps(f_max=1))
    assert m.entry((), 0) == TropSeries.parameter("p")


def test_cap_monotonicity():
    src = "Y (\\x:Nat. 0 (+p) x)"
    vals = []
    for fmax in (1, 2, 4):
        m = interpret(parse(src, "pcfl"), [], "pcfl", Caps(f_max=fmax))
        vals.append(m.entry((), 0).eval({"p": Fraction(1), "p'": Fraction(1)}))
    assert vals[0] >= vals[1] >= vals[2]


# ------------------------------------------------------------- matrix_apply


def test_matrix_apply_identity():
    X = NatSet(2)
    m = identity(X)
    out = matrix_apply(m, {0: Fraction(3), 1: Fraction(7)})
    assert out[0] == 3 and out[1] == 7 and out[2] == INF


def test_matrix_apply_zxx():
    m = interpret(parse("z x x"), ZXX_CTX, "stlc")
    x = {("@", 0, STAR): Fraction(1), ("@", 1, zpoint(1, 1)): Fraction(0)}
    out = matrix_apply(m, x)
    assert out[STAR] == 2


def test_matrix_apply_fix_neglog():
    import math

    m = interpret(parse("Y (\\x:Nat. 0 (+p) x)", "pcfl"), [], "pcfl", Caps(f_max=4))
    m.entry((), 0)
    out = matrix_apply(m, {}, params={"p": -math.log(0.5), "p'": -math.log(0.5)})
    assert abs(out[0] - (-math.log(0.5))) < 1e-9


# ------------------------------------------------------ substitution lemma


def test_substitution_lemma_samples():
    from tropcalc.terms import subst, Var

    cases = [
        ("z x x", "x", "y", [("y", O), ("z", Arrow(O, Arrow(O, O)))]),
        ("f (f x)", "f", "g", [("x", O), ("g", Arrow(O, O))]),
    ]
    for src, var, rep, ctx in cases:
        t = parse(src)
        lhs = interpret(subst(t, var, Var(rep)), ctx, "stlc")
        # independently: interpret the redex (\var. t) rep
        vty = dict(ctx)[rep]
        redex = f"(\\{var}:{vty}. {src}) {rep}"
        rhs = interpret(parse(redex), ctx, "stlc")
        for bag in lhs.dom.bags(2):
            for pt in lhs.cod.points():
                assert lhs.entry(bag, pt) == rhs.entry(bag, pt)
