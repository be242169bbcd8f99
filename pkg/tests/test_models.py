import pytest

from qorder.exactnum import QLaurent, cyclotomic_build
from qorder import engine, models
from qorder.engine import Element
from qorder.zlattice import NotSkew, is_skew


def test_build_twisted_presets():
    m = models.build_twisted([[0, 1], [-1, 0]], 2)
    assert m.gens == ["x1", "x2"]
    assert m.presentation.n_poly == 2
    m0 = models.build_twisted([[0, 0], [0, 0]], 0)
    assert all(m0.presentation.is_invertible(i) for i in range(2))


def test_borel_preset():
    b = models.build_borel_sl2()
    assert b.kind == "borel-sl2"
    assert b.gens == ["f", "k"]
    assert b.S == [[0, 2], [-2, 0]]
    assert b.presentation.n_poly == 1
    # k f = q^-2 f k
    w = engine.normal_form([1, 0], b.presentation)
    assert w == Element.monomial(2, (1, 1), QLaurent.q_power(-2))
    assert b.admissibility(3)
    assert not b.admissibility(2)


def test_weyl_matrices_n1():
    wm = models.build_weyl_matrices([[0]], [1])
    assert wm.texp == [[0]]
    assert wm.uexp == [[1]]
    assert wm.sstar == [[0, -1], [1, 0]]
    assert wm.qexp == wm.sstar


def test_weyl_matrices_n2():
    wm = models.build_weyl_matrices([[0, 1], [-1, 0]], [1, 1])
    assert wm.texp[0][1] == 2 and wm.texp[1][0] == -2
    assert wm.uexp == [[1, -1], [2, 1]]
    assert is_skew(wm.sstar)


def test_weyl_matrices_reject_zero_exponent():
    with pytest.raises(ValueError):
        models.build_weyl_matrices([[0]], [0])
    with pytest.raises(NotSkew):
        models.build_weyl_matrices([[0, 1], [1, 0]], [1, 1])


def test_build_weyl_relation():
    W = models.build_weyl([[0]], [1])
    P = W.presentation
    x = Element.gen(P.N, W.xpos(1))
    y = Element.gen(P.N, W.ypos(1))
    # x y = q y x + 1
    assert engine.mul(P, x, y) == \
        engine.mul(P, y, x).scale(QLaurent.q_power(1)) + Element.one(P.N)
    # w_1 = 1 + (q - 1) y x and [x, y] = w_1
    assert W.w[1] == Element(P.N, {(0, 0): QLaurent.one(),
                                   (1, 1): QLaurent({1: 1, 0: -1})})
    assert engine.commutator(P, x, y) == W.w[1]


def test_build_weyl_n2_lower_terms():
    W = models.build_weyl([[0, 1], [-1, 0]], [1, 1])
    P = W.presentation
    x2 = Element.gen(P.N, W.xpos(2))
    y2 = Element.gen(P.N, W.ypos(2))
    prod = engine.mul(P, x2, y2)
    # relation for the second pair includes (q_1 - 1) y_1 x_1 + 1
    expect = engine.mul(P, y2, x2).scale(QLaurent.q_power(1)) + W.w[1]
    assert prod == expect


def test_weyl_exponent_roundtrip():
    # extracting the q-exponents from the built presentation reproduces
    # the assembled skew matrix
    for S, exps in (([[0]], [1]), ([[0, 1], [-1, 0]], [1, 2]),
                    ([[0, -2], [2, 0]], [3, 1])):
        W = models.build_weyl(S, exps)
        P = W.presentation
        n = W.n
        got = [[0] * (2 * n) for _ in range(2 * n)]
        order = [("y", i) for i in range(1, n + 1)] + \
                [("x", i) for i in range(1, n + 1)]
        pos = {("y", i): W.ypos(i) for i in range(1, n + 1)}
        pos.update({("x", i): W.xpos(i) for i in range(1, n + 1)})
        for a, ga in enumerate(order):
            for b, gb in enumerate(order):
                got[a][b] = P.S[pos[ga]][pos[gb]]
        assert got == W.matrices.sstar


def test_f_elements_n1(r3):
    W = models.build_weyl([[0]], [1])
    rep = models.f_elements_and_z0_brackets(W, r3)
    assert rep.f_exprs[0] == {(0, 0): r3.one()}
    # frozen: gamma_1 = -(1 - eps)^3 = 3 + 6 eps, and the sum bound is k <= i
    gamma = rep.gammas[0]
    e = r3.eps()
    assert gamma == -((r3.one() - e) ** 3)
    assert gamma == r3.scalar(3) + e * 6
    assert rep.gamma_bound == "k<=i"
    assert rep.shapes_ok
    assert rep.kappa == r3.scalar(9) * e.inverse()
    # diagonal additive constant times gamma equals kappa * s_1
    assert rep.f_consts[0] * gamma == rep.kappa


def test_f_elements_n1_l2():
    r2 = cyclotomic_build(2)
    W = models.build_weyl([[0]], [1])
    rep = models.f_elements_and_z0_brackets(W, r2)
    # at l = 2: f_1 = 1 - 4 a b (hand expansion of (1 + (eps-1) y x)^2)
    assert rep.gammas[0] == r2.scalar(-4)
    assert rep.shapes_ok


def test_f_elements_n2(r3):
    W = models.build_weyl([[0, 1], [-1, 0]], [1, 1])
    rep = models.f_elements_and_z0_brackets(W, r3)
    assert rep.shapes_ok, rep.shape_notes
    assert all(not g.is_zero() for g in rep.gammas)
    assert rep.gamma_bound == "k<=i"
    # f_2 - f_1 lies in the ideal of a_2 b_2
    f2 = dict(rep.f_exprs[2])
    for key, c in rep.f_exprs[1].items():
        cur = f2.get(key, r3.zero()) - c
        if cur:
            f2[key] = cur
        else:
            f2.pop(key, None)
    for key in f2:
        assert key[1] >= 1 and key[3] >= 1  # a2, b2 exponents


def test_bracket_table_shapes_n2(r3):
    W = models.build_weyl([[0, 1], [-1, 0]], [1, 1])
    rep = models.f_elements_and_z0_brackets(W, r3)
    n = 2
    mats = W.matrices
    # off-diagonal brackets are kappa * exponent * product
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                expr = rep.brackets[("a%d" % i, "a%d" % j)]
                key = tuple(1 if t in (i - 1, j - 1) else 0
                            for t in range(2 * n))
                assert set(expr) <= {key}
                got = expr.get(key, r3.zero())
                assert got == rep.kappa * r3.scalar(mats.texp[i - 1][j - 1])
            if i != j:
                expr = rep.brackets[("a%d" % i, "b%d" % j)]
                key = tuple(1 if t in (i - 1, n + j - 1) else 0
                            for t in range(2 * n))
                assert set(expr) <= {key}
                got = expr.get(key, r3.zero())
                assert got == rep.kappa * r3.scalar(mats.uexp[i - 1][j - 1])


def test_twisted_z0_table(r3, r5):
    m = models.build_twisted([[0, 1], [-1, 0]], 2)
    for r in (r3, r5):
        names, exprs, kappa = models.twisted_z0_table(m, r)
        assert names == ["a1", "a2"]
        e = r.eps()
        assert kappa == r.scalar(r.l * r.l) * e.inverse()
        assert exprs[("a1", "a2")] == {(1, 1): kappa}
    m0 = models.build_twisted([[0, 0], [0, 0]], 2)
    names, exprs, kappa = models.twisted_z0_table(m0, r3)
    assert kappa is None
    assert all(not e for e in exprs.values())


def test_pair_exponent_table():
    W = models.build_weyl([[0, 1], [-1, 0]], [1, 2])
    # x_i w_j = q^(s_i) w_j x_i for i <= j, commute for i > j
    assert models.weyl_pair_exponent(W, ("x", 1), ("w", 2)) == 1
    assert models.weyl_pair_exponent(W, ("x", 2), ("w", 2)) == 2
    assert models.weyl_pair_exponent(W, ("x", 2), ("w", 1)) == 0
    assert models.weyl_pair_exponent(W, ("y", 1), ("w", 1)) == -1
    assert models.weyl_pair_exponent(W, ("w", 1), ("y", 1)) == 1
    assert models.weyl_pair_exponent(W, ("w", 1), ("w", 2)) == 0
