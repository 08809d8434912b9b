"""Lie layer: cyclic matrix model, tensor and 3-graded constructions,
the split-triple bridge between them, and the realization of the big
derivation algebra over the rank-2 double."""

import numpy as np
import pytest

from ckder import (FieldSpec, DerivationSpace, amod, build_s4, cheng_kac,
                   check_3grading, check_super_lie, coordinate_algebra,
                   derivation_algebra, find_sl2_triple,
                   inner_derivation_algebra, kantor_double,
                   lie_from_derivations, phi_iso, phi_star, der_as_tkk,
                   sl2_identification, so3, stable_der_double,
                   tits_construction, tkk_3graded, truncated_poly)
from ckder.tkk import LieSuperAlgebra

F3 = FieldSpec(3)
F5 = FieldSpec(5)
F9 = FieldSpec(3, ext=True)


@pytest.fixture(scope="module")
def kd3():
    return kantor_double(truncated_poly(F3))


@pytest.fixture(scope="module")
def inder3(kd3):
    return inner_derivation_algebra(kd3.alg)


@pytest.fixture(scope="module")
def der3(kd3):
    return derivation_algebra(kd3.alg)


@pytest.fixture(scope="module")
def tkk3(kd3, inder3):
    return tkk_3graded(kd3.alg, inder3)


@pytest.fixture(scope="module")
def kd5():
    return kantor_double(truncated_poly(F5))


@pytest.fixture(scope="module")
def inder5(kd5):
    return inner_derivation_algebra(kd5.alg)


def basis_vec(lie, i):
    v = np.zeros(lie.n, dtype=np.complex128)
    v[i] = 1
    return v


def test_cyclic_matrix_model():
    """The rank-3 skew model: cyclic brackets, and the trace form is
    -2 times the identity after reduction."""
    lie = so3(F5)
    assert lie.labels == ["E1", "E2", "E3"]
    assert (lie.dim_even, lie.dim_odd) == (3, 0)
    def reduced(key):
        return [(k, F5.reduce(c)) for k, c in lie.brackets[key]]

    assert reduced((0, 1)) == [(2, 1)]
    assert reduced((1, 0)) == [(2, 4)]
    assert reduced((1, 2)) == [(0, 1)]
    assert reduced((2, 0)) == [(1, 1)]
    assert (0, 0) not in lie.brackets
    assert np.array_equal(lie.trace_form, amod(F5, -2 * np.eye(3)))
    # the attached matrices really are the cross-product generators
    for i, m in enumerate(lie.matrices):
        e = np.zeros(3)
        e[i] = 1
        for j in range(3):
            f = np.zeros(3)
            f[j] = 1
            assert np.array_equal(m @ f, np.cross(e, f))
    ext = so3(F9)
    assert np.array_equal(ext.trace_form, amod(F9, -2 * np.eye(3)))


def test_bracket_table_json_round_trip(tkk3):
    blob = tkk3.to_json()
    assert "brackets" in blob and "products" not in blob
    assert "unit" not in blob and "fine_label" not in blob
    assert blob["grading"] == tkk3.grading
    back = LieSuperAlgebra.from_json(blob)
    assert back.labels == tkk3.labels
    assert back.grading == tkk3.grading
    assert set(back.brackets) == set(tkk3.brackets)
    for key, terms in tkk3.brackets.items():
        got = [(k, F3.reduce(c)) for k, c in back.brackets[key]]
        want = [(k, F3.reduce(c)) for k, c in terms]
        assert got == want


def test_double_tensor_construction_is_lie(kd3, der3, inder3):
    """The tensor construction over the double, against both the full
    derivation algebra (odd excess included) and the stable part."""
    full = tits_construction(kd3.alg, der3, inder=inder3)
    assert (full.dim_even, full.dim_odd) == (12, 13)
    assert check_super_lie(full)
    bar = stable_der_double(kd3, der3, inder3)
    stable = tits_construction(kd3.alg, bar, inder=inder3)
    assert (stable.dim_even, stable.dim_odd) == (12, 12)
    assert check_super_lie(stable)
    # index helpers agree with the label layout
    assert stable.labels[stable.idx_tensor(1, 0)] == "E2*t^0"
    assert stable.labels[stable.idx_der(0, 0)] == "d0"


def test_tensor_construction_needs_inner_derivations(kd3):
    empty = DerivationSpace(kd3.alg, [], [])
    with pytest.raises(ValueError, match="misses inner"):
        tits_construction(kd3.alg, empty)


def test_three_graded_double(kd3, tkk3):
    assert (tkk3.dim_even, tkk3.dim_odd) == (12, 12)
    assert check_super_lie(tkk3)
    assert check_3grading(tkk3)
    tags = tkk3.grading
    assert sum(1 for g in tags if g == 1) == 6
    assert sum(1 for g in tags if g == -1) == 6
    assert sum(1 for g in tags if g == 0) == 12
    u = kd3.alg.unit_index
    # bracketing the two shifted copies of the unit recovers the
    # multiplication operator of the unit
    got = tkk3.multiply(basis_vec(tkk3, tkk3.idx_plus(u)),
                        basis_vec(tkk3, tkk3.idx_minus(u)))
    assert np.array_equal(got, basis_vec(tkk3, tkk3.idx_lmult(u)))
    # and that operator fixes every plus vector
    for a in range(kd3.alg.n):
        got = tkk3.multiply(basis_vec(tkk3, tkk3.idx_lmult(u)),
                            basis_vec(tkk3, tkk3.idx_plus(a)))
        assert np.array_equal(got, basis_vec(tkk3, tkk3.idx_plus(a)))


def test_three_graded_big_algebra():
    ck = cheng_kac(truncated_poly(F3))
    lie = tkk_3graded(ck.alg)
    assert lie.n == 96
    assert (lie.dim_even, lie.dim_odd) == (48, 48)
    assert check_super_lie(lie)
    assert check_3grading(lie)
    tags = lie.grading
    assert sum(1 for g in tags if g == 1) == 24
    assert sum(1 for g in tags if g == -1) == 24
    assert sum(1 for g in tags if g == 0) == 48


def test_grading_check_flags_violations(tkk3):
    broken = LieSuperAlgebra(F3, tkk3.dim_even, tkk3.dim_odd, tkk3.labels,
                             tkk3.brackets, grading=None)
    assert not check_3grading(broken)
    tags = list(tkk3.grading)
    tags[tkk3.idx_plus(0)] = -1
    broken = LieSuperAlgebra(F3, tkk3.dim_even, tkk3.dim_odd, tkk3.labels,
                             tkk3.brackets, grading=tags)
    v = check_3grading(broken)
    assert not v
    assert "pair" in v.witness


def test_split_triple_fixed_coordinates():
    """The split triple in the cyclic basis, with its defining
    relations rechecked through the structure tensor."""
    frozen = {
        5: {"h": [0, 0, 4], "e": [3, 1, 0], "f": [3, 4, 0]},
    }
    for p, want in frozen.items():
        f = FieldSpec(p)
        triple = find_sl2_triple(f)
        for key, coords in want.items():
            assert np.array_equal(triple[key], np.array(coords)), (p, key)
    u = F9.sqrt_minus_one()
    triple = find_sl2_triple(F9)
    assert np.array_equal(triple["h"], np.array([0, 0, 2 * u]))
    assert np.array_equal(triple["e"], np.array([2 * u, 1, 0]))
    assert np.array_equal(triple["f"], np.array([2 * u, 2, 0]))
    for f in (F5, F9):
        t = so3(f).tensor()
        triple = find_sl2_triple(f)
        h, e, fv = triple["h"], triple["e"], triple["f"]

        def br(x, y):
            return amod(f, np.einsum("i,j,ijk->k", x, y, t))

        assert np.array_equal(br(h, e), amod(f, 2 * e))
        assert np.array_equal(br(h, fv), amod(f, -2 * fv))
        assert np.array_equal(br(e, fv), h)
    with pytest.raises(ValueError):
        find_sl2_triple(F3)


def test_tensor_to_graded_bridge(kd5, inder5):
    """The two constructions over the double are explicitly isomorphic
    once the tensor side runs over the inner derivations."""
    tits = tits_construction(kd5.alg, inder5, inder=inder5)
    tkk = tkk_3graded(kd5.alg, inder5)
    assert tits.n == tkk.n == 40
    iso = sl2_identification(tits, tkk)
    assert iso.verified
    assert iso.detail["sl2"]["h"] == [[0], [0], [4]]
    # the map carries the derivation block across unchanged
    m = iso.map.matrix
    assert m[tkk.idx_der(0, 0), tits.idx_der(0, 0)] == 1


def test_bridge_rejects_mismatched_inputs(kd3, der3, inder3, tkk3, kd5,
                                          inder5):
    over_full = tits_construction(kd3.alg, der3, inder=inder3)
    with pytest.raises(ValueError, match="inner"):
        sl2_identification(over_full, tkk3)
    with pytest.raises(ValueError, match="different algebras"):
        sl2_identification(tits_construction(kd5.alg, inder5, inder=inder5),
                           tkk3)


def test_derivations_as_abstract_brackets(kd3, inder3):
    lie = lie_from_derivations(inder3)
    assert (lie.dim_even, lie.dim_odd) == (3, 3)
    assert lie.labels == [f"D{k}" for k in range(6)]
    assert check_super_lie(lie)
    assert lie.space is inder3


def test_big_derivations_from_double_tensor():
    """The full derivation algebra of the big algebra is the tensor
    construction over the stable derivations of the double, and the
    inner part matches the construction over the inner ones."""
    f = F9
    dalg = truncated_poly(f)
    ck = cheng_kac(dalg, basis="v")
    kd = kantor_double(dalg)
    act = build_s4(ck)
    der_j = derivation_algebra(ck.alg)
    inder_j = inner_derivation_algebra(ck.alg)
    coord = coordinate_algebra(ck, der_j, act)
    phi = phi_iso(kd, coord)
    transfer = phi_star(ck, kd, coord, phi)
    der_k = derivation_algebra(kd.alg)
    inder_k = inner_derivation_algebra(kd.alg)
    bar_k = stable_der_double(kd, der_k, inder_k)
    full, inner = der_as_tkk(ck, kd, act, coord, phi, transfer,
                             der_j, inder_j, bar_k, inder_k)
    assert full.verified
    assert inner.verified
    assert full.map.source.n == full.map.target.n == 24
    assert inner.map.source.n == inner.map.target.n == 24
