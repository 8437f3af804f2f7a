"""Truncated deformations, equivalence transport, triviality solving."""

import random
from fractions import Fraction

import pytest

from bihom.algebra import (
    BiHomDialgebra,
    basis_vec,
    catalog,
    table_from_entries,
)
from bihom.cohomology import (
    TreeCochain,
    dialg_coboundaries,
    dialg_cocycles,
    dialg_compatible_space,
)
from bihom.deformation import (
    EquivalenceTransformation,
    LAW_FOR_TREE,
    TruncatedDeformation,
    base_change_pullback,
    base_change_pushforward,
    check_equivalence,
    deformation_residual,
    displayed_family_residuals,
    identity_transformation,
    infinitesimal,
    is_deformation_up_to,
    operadic_residual,
    solve_triviality,
    zero_deformation,
)
from bihom.dsl import build_block, parse
from bihom.operad import pi_element
from bihom.scalars import Mat


def alg22():
    return catalog()["Alg2_2"].build(a=1)


def corpus_d1():
    with open("corpus/deform_alg2_2.dlg") as fh:
        df = parse(fh.read())
    return build_block(df, "D1")


def cocycle_basis(A, n=2):
    return [
        TreeCochain.unflatten(n, A.dim, row)
        for row in dialg_cocycles(A, n).basis_rows()
    ]


def test_zero_deformation_is_valid_at_every_order():
    for name in ("Alg2_2", "Alg3_4"):
        entry = catalog()[name]
        A = entry.build(**{p: 1 for p in entry.params})
        for order in (0, 1, 3):
            defm = zero_deformation(A, order)
            assert defm.order == order
            assert is_deformation_up_to(defm, order).ok
            for n in range(order + 1):
                # order 0 is the base structure's own residual
                assert deformation_residual(defm, n).is_zero()


def test_residual_routes_agree():
    """Direct law-coefficient expansion vs the operad's circle product,
    on a valid deformation and on a broken one."""
    d1 = corpus_d1()
    A = d1.base
    C = dialg_compatible_space(A, 2)
    bad_term = next(
        TreeCochain.unflatten(2, 2, row)
        for row in C.basis_rows()
        if not dialg_cocycles(A, 2).contains(row)
    )
    broken = TruncatedDeformation(A, [bad_term])
    for defm in (d1, broken):
        for n in range(defm.order + 1):
            assert deformation_residual(defm, n) == operadic_residual(defm, n)


def test_order_zero_residual_detects_axioms():
    A = alg22()
    assert deformation_residual(zero_deformation(A), 0).is_zero()
    vdash = table_from_entries(2, {(1, 2): {1: 1}, (2, 1): {1: 1}, (2, 2): {2: 1}})
    bad = BiHomDialgebra(2, A.dashv, vdash, A.phi, A.psi)
    assert not deformation_residual(zero_deformation(bad), 0).is_zero()


def test_cocycle_term_gives_first_order_deformation():
    A = alg22()
    for z in cocycle_basis(A):
        defm = TruncatedDeformation(A, [z])
        assert infinitesimal(defm) == z
        assert deformation_residual(defm, 1).is_zero()
        assert is_deformation_up_to(defm, 1).ok


def test_non_cocycle_term_fails_at_order_one():
    A = alg22()
    Z = dialg_cocycles(A, 2)
    bad = next(
        TreeCochain.unflatten(2, 2, row)
        for row in dialg_compatible_space(A, 2).basis_rows()
        if not Z.contains(row)
    )
    chk = is_deformation_up_to(TruncatedDeformation(A, [bad]), 1)
    assert not chk.ok
    assert chk.failed_order == 1
    assert chk.witness.law in LAW_FOR_TREE
    assert any(chk.witness.residual)


def test_displayed_residuals_partition_the_full_one():
    d1 = corpus_d1()
    bad = TruncatedDeformation(
        d1.base, [cocycle_basis(d1.base)[0].scale(Fraction(3, 2))]
    )
    for defm, n in ((d1, 2), (bad, 1)):
        full = deformation_residual(defm, n)
        per_law = displayed_family_residuals(defm, n)
        assert set(per_law) == set(LAW_FOR_TREE)
        merged = {}
        for law, coch in per_law.items():
            t = LAW_FOR_TREE.index(law)
            for (tt, args), v in coch.data.items():
                assert tt == t
                merged[(tt, args)] = v
        assert merged == dict(full.data)


def test_residual_order_bounds_and_extension():
    d1 = corpus_d1()
    with pytest.raises(ValueError):
        deformation_residual(d1, 3)
    ext = d1.extended(4)
    assert ext.order == 4
    assert ext.term(3).is_zero() and ext.term(4).is_zero()
    assert ext.term(1) == d1.term(1)
    assert deformation_residual(ext, 3) == operadic_residual(ext, 3)
    with pytest.raises(ValueError):
        d1.extended(1)


def test_term_accessors_and_validation():
    A = alg22()
    d1 = corpus_d1()
    assert d1.term(0) == pi_element(d1.base)
    with pytest.raises(ValueError):
        d1.term(5)
    e2 = basis_vec(2, 1)
    assert d1.product(7, 0, e2, e2) == (0, 0)
    with pytest.raises(ValueError, match="arity-2"):
        TruncatedDeformation(A, [TreeCochain.zero(3, 2)])
    with pytest.raises(ValueError, match="does not intertwine"):
        TruncatedDeformation(
            A, [TreeCochain(2, 2, {(0, (0, 0)): (Fraction(0), Fraction(1))})]
        )
    loose = TruncatedDeformation(
        A,
        [TreeCochain(2, 2, {(0, (0, 0)): (Fraction(0), Fraction(1))})],
        require_compatible=False,
    )
    assert loose.order == 1
    with pytest.raises(AttributeError):
        loose.terms = ()


def test_base_change_pullback_preserves_validity():
    d1 = corpus_d1()
    same = base_change_pullback(d1, Mat.identity(2))
    assert same.term(1) == d1.term(1) and same.term(2) == d1.term(2)
    assert (same.base.phi - d1.base.phi).is_zero()

    # 2*id rescales every product linearly
    scaled = base_change_pullback(d1, Mat.identity(2).scale(2))
    e2 = basis_vec(2, 1)
    assert scaled.product(0, 0, e2, e2) == tuple(
        2 * c for c in d1.product(0, 0, e2, e2)
    )
    assert is_deformation_up_to(scaled, 2).ok

    for S in (Mat.from_rows([[1, 1], [0, 1]]), Mat.from_rows([[2, 1], [1, 1]])):
        pulled = base_change_pullback(d1, S)
        assert is_deformation_up_to(pulled, 2).ok

    with pytest.raises(ValueError, match="singular"):
        base_change_pullback(d1, Mat.from_rows([[1, 1], [1, 1]]))


def test_transformation_inverse_is_inverse():
    rng = random.Random(41)
    for _ in range(5):
        maps = [Mat.identity(3)] + [
            Mat.from_rows(
                [[Fraction(rng.randint(-2, 2)) for _ in range(3)] for _ in range(3)]
            )
            for _ in range(2)
        ]
        psit = EquivalenceTransformation(tuple(maps))
        chis = psit.inverse_maps(4)
        for n in range(5):
            acc = Mat.zeros(3, 3)
            for i in range(n + 1):
                acc = acc + psit.map(i) @ chis[n - i]
            assert acc == (Mat.identity(3) if n == 0 else Mat.zeros(3, 3))
        inv = psit.truncated_inverse(4)
        assert inv.truncated_inverse(2).map(1) == psit.map(1)
    with pytest.raises(ValueError, match="identity"):
        EquivalenceTransformation((Mat.zeros(2, 2),))


def test_pushforward_of_zero_deformation():
    """Transport by a twist-commuting psi_t gives a valid deformation
    equivalent to zero, and the triviality solver recovers a witness."""
    rng = random.Random(42)
    for name in ("Alg2_2", "Alg2_4"):
        entry = catalog()[name]
        A = entry.build(**{p: 1 for p in entry.params})
        for _ in range(5):
            a, b = Fraction(rng.randint(1, 3)), Fraction(rng.randint(-2, 2))
            psi1 = Mat.identity(A.dim).scale(a) + A.phi.scale(b)
            psit = EquivalenceTransformation((Mat.identity(A.dim), psi1))
            pushed = base_change_pushforward(zero_deformation(A), psit)
            assert is_deformation_up_to(pushed, pushed.order).ok
            assert check_equivalence(
                zero_deformation(A, 1), pushed, psit, 1
            ).ok
            res = solve_triviality(pushed, pushed.order)
            assert res.trivial
            assert check_equivalence(
                pushed,
                zero_deformation(A, res.witness.order),
                res.witness,
                pushed.order,
            ).ok


def test_pushforward_requires_twist_compatibility():
    A = alg22()
    bad = EquivalenceTransformation(
        (Mat.identity(2), Mat.from_rows([[0, 0], [1, 0]]))
    )
    with pytest.raises(ValueError, match="does not intertwine"):
        base_change_pushforward(zero_deformation(A), bad)
    loose = base_change_pushforward(zero_deformation(A), bad, require_compatible=False)
    assert loose.order == 1


def test_corpus_deformation_is_trivial():
    d1 = corpus_d1()
    assert is_deformation_up_to(d1, 2).ok
    res = solve_triviality(d1, 2)
    assert res.trivial and res.obstruction is None
    assert res.witness.map(1) == Mat.from_rows([[Fraction(-1, 2), 0], [0, 0]])
    assert res.witness.map(2) == Mat.from_rows(
        [[Fraction(-11, 4), Fraction(-3, 2)], [0, 0]]
    )
    zero2 = zero_deformation(d1.base, 2)
    assert check_equivalence(d1, zero2, res.witness, 2).ok
    assert check_equivalence(zero2, d1, res.witness.truncated_inverse(), 2).ok


def test_obstruction_reporting():
    A = alg22()
    Z = dialg_cocycles(A, 2)
    B = dialg_coboundaries(A, 2)
    stuck = next(
        TreeCochain.unflatten(2, 2, row)
        for row in Z.basis_rows()
        if not B.contains(row)
    )
    res = solve_triviality(TruncatedDeformation(A, [stuck]), 1)
    assert not res.trivial
    assert res.obstructed_order == 1
    assert res.obstruction == stuck
    assert res.obstruction_closed is True

    unclosed = next(
        TreeCochain.unflatten(2, 2, row)
        for row in dialg_compatible_space(A, 2).basis_rows()
        if not Z.contains(row)
    )
    res2 = solve_triviality(TruncatedDeformation(A, [unclosed]), 1)
    assert res2.obstructed_order == 1
    assert res2.obstruction_closed is False


def test_first_order_transport_relation():
    """x -|'_1 y = x -|_1 y + psi_1(x -|_0 y) - psi_1(x) -|_0 y
    - x -|_0 psi_1(y), and likewise for |-; flipping the sign of the
    psi_1(x *_0 y) term breaks the equivalence."""
    A = alg22()
    z = cocycle_basis(A)[0]
    defm1 = TruncatedDeformation(A, [z])
    psi1 = Mat.identity(2).scale(2) + A.phi
    psit = EquivalenceTransformation((Mat.identity(2), psi1))

    def transported(sign):
        data = {}
        for t in (0, 1):
            for a in range(2):
                for b in range(2):
                    ea, eb = basis_vec(2, a), basis_vec(2, b)
                    base = defm1.product(0, t, ea, eb)
                    v = tuple(
                        z.eval(t, [ea, eb])[k]
                        + sign * psi1.apply(base)[k]
                        - defm1.product(0, t, psi1.apply(ea), eb)[k]
                        - defm1.product(0, t, ea, psi1.apply(eb))[k]
                        for k in range(2)
                    )
                    if any(v):
                        data[(t, (a, b))] = v
        return TruncatedDeformation(A, [TreeCochain(2, 2, data)])

    good = check_equivalence(defm1, transported(+1), psit, 1)
    assert good.ok
    assert good.twist_intertwining == ((1, "phi", True), (1, "psi", True))
    assert not check_equivalence(defm1, transported(-1), psit, 1).ok


def test_equivalence_reflexive_and_twist_mismatch():
    d1 = corpus_d1()
    assert check_equivalence(d1, d1, identity_transformation(2), 2).ok
    A = d1.base
    other = BiHomDialgebra(2, A.dashv, A.vdash, Mat.identity(2), Mat.identity(2))
    bad = check_equivalence(
        zero_deformation(A), zero_deformation(other), identity_transformation(2), 0
    )
    assert not bad.ok
    assert bad.witness == ("twist_mismatch",)
