"""Recognition of SL2(2^n) and the pair-carried field."""
import random

import pytest

from bbsl2 import oracle
from bbsl2.backend import make_matrix_blackbox
from bbsl2.blackbox import element_order
from bbsl2.errors import ContractViolation, InputError
from bbsl2.involutions import find_order3_inverted
from bbsl2.sl2char2 import (
    Char2Field,
    dihedral_frame,
    enumerate_unipotent,
    involution_sample,
    recover_char2,
)


def test_involution_sample(sl2_8, rng):
    for _ in range(10):
        r = involution_sample(sl2_8, rng)
        assert not sl2_8.is_identity(r)
        assert sl2_8.is_identity(sl2_8.power(r, 2))


def test_dihedral_frame_relations(sl2_8, rng):
    r = involution_sample(sl2_8, rng)
    theta = find_order3_inverted(sl2_8, r, rng)
    frame = dihedral_frame(sl2_8, r, theta)
    assert element_order(sl2_8, frame.weyl) == 2
    assert element_order(sl2_8, frame.v1) == 2
    assert not sl2_8.commutes(frame.r, frame.weyl)
    # conjugation by the Weyl candidate swaps r onto the opposite unipotent
    assert sl2_8.compare(sl2_8.conj(frame.r, frame.weyl), frame.v1)


def test_dihedral_frame_rejects_commuting_theta(sl2_8, rng):
    r = involution_sample(sl2_8, rng)
    with pytest.raises(ContractViolation):
        dihedral_frame(sl2_8, r, sl2_8.identity)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_enumerate_unipotent_is_the_full_subgroup(n, rng):
    box = make_matrix_blackbox(2, n, opaque=False, seed=4)
    be = box.backend
    r = involution_sample(box, rng)
    elements, basis = enumerate_unipotent(box, r, rng, n)
    assert len(elements) == 2**n
    assert len(basis) == n
    assert box.is_identity(elements[0])
    decoded = {be.decode(x) for x in elements}
    group = oracle.closure(be.field, be.standard_generators())
    want = oracle.centralizer_set(be.field, group, be.decode(r))
    assert decoded == want  # C(r) is exactly the unipotent subgroup through r
    # index arithmetic: products track bitwise xor of indices
    for i in (1, 3, 2**n - 1):
        for j in (1, 2, 2**n - 2):
            assert be.decode(box.mul(elements[i], elements[j])) == be.decode(
                elements[i ^ j]
            )


@pytest.fixture(scope="module")
def field8():
    box = make_matrix_blackbox(2, 3, opaque=True, seed=9)
    rng = random.Random(17)
    r = involution_sample(box, rng)
    theta = find_order3_inverted(box, r, rng)
    frame = dihedral_frame(box, r, theta)
    elements, basis = enumerate_unipotent(box, frame.r, rng, 3)
    return Char2Field(box, frame, elements, basis, 3)


def test_char2field_lift_read_roundtrip(field8):
    for j in range(8):
        assert field8.read_int(field8.lift_int(j)) == j
    with pytest.raises(InputError):
        field8.lift_int(8)


def test_char2field_addition_is_xor_of_indices(field8):
    for i in range(8):
        for j in range(8):
            s = field8.add(field8.lift_int(i), field8.lift_int(j))
            assert field8.read_int(s) == i ^ j


def test_char2field_axioms(field8):
    rng = random.Random(3)
    one, zero = field8.one, field8.zero
    for _ in range(60):
        a = field8.random_element(rng)
        b = field8.random_element(rng)
        c = field8.random_element(rng)
        assert field8.eq(field8.mul(a, b), field8.mul(b, a))
        assert field8.eq(
            field8.mul(a, field8.mul(b, c)), field8.mul(field8.mul(a, b), c)
        )
        assert field8.eq(
            field8.mul(a, field8.add(b, c)),
            field8.add(field8.mul(a, b), field8.mul(a, c)),
        )
        assert field8.eq(field8.mul(one, a), a)
        assert field8.is_zero(field8.add(a, a))  # characteristic 2
        assert field8.is_zero(field8.mul(zero, a))
        if not field8.is_zero(a):
            assert field8.eq(field8.mul(a, field8.inv(a)), one)
    with pytest.raises(ZeroDivisionError):
        field8.inv(zero)


def test_char2field_multiplicative_group_order(field8):
    # the nonzero elements form a cyclic group of order 7 (prime): every
    # element besides one is a generator
    a = field8.lift_int(3)
    seen = {field8.read_int(a)}
    x = a
    for _ in range(6):
        x = field8.mul(x, a)
        seen.add(field8.read_int(x))
    assert seen == set(range(1, 8))


def test_char2field_explicit_table_matches(field8):
    E = field8.to_explicit()
    E.validate(random.Random(1))
    for i in range(8):
        for j in range(8):
            assert field8.read_int(field8.mul(field8.lift_int(i), field8.lift_int(j))) == E.mul(i, j)


def test_recover_char2_rejects_small_n(rng):
    box = make_matrix_blackbox(2, 2, opaque=True, seed=1)
    with pytest.raises(InputError):
        recover_char2(box, 1, rng)


@pytest.mark.parametrize("n", [2, 3])
def test_recover_char2_full_run(n, rng):
    box = make_matrix_blackbox(2, n, opaque=True, seed=23)
    res = recover_char2(box, n, rng, trials=60)
    v = res.verification
    assert v["phi_homomorphism_checks"] == {"trials": 60, "passes": 60}
    assert v["carrier_size"] == 2**n
    assert v["ring_iso_to_standard"] and not v["is_center_quotient"]
    assert res.params == {"p": 2, "k": n, "q": 2**n}


def test_recover_char2_image_generates_whole_group(rng):
    box = make_matrix_blackbox(2, 3, opaque=False, seed=29)
    be = box.backend
    res = recover_char2(box, 3, rng, trials=10)
    phi = res.morphism
    E = res.explicit
    one, tau = E.one, E.primitive_element()
    imgs = [
        be.decode(phi(((one, one), (0, one)))),
        be.decode(phi(((0, one), (one, 0)))),
        be.decode(phi(((tau, 0), (0, E.inv(tau))))),
    ]
    assert len(oracle.closure(be.field, imgs)) == 504  # |SL2(8)|


def test_recover_char2_morphism_preserves_traces(rng):
    box = make_matrix_blackbox(2, 3, opaque=False, seed=29)
    be = box.backend
    F = be.field
    res = recover_char2(box, 3, rng, trials=10)
    phi, E = res.morphism, res.explicit
    from bbsl2 import modp

    iso = res.extras["iso_matrix"]
    for _ in range(60):
        m = oracle.random_sl2(E, rng)
        got = be.decode(phi(m))
        want_tr = F.element(modp.vec_mat(E.coords(E.add(m[0][0], m[1][1])), iso, 2))
        assert F.add(got[0][0], got[1][1]) == want_tr
