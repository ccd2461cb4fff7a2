"""Chief series, crowns, coronas, and crown-based powers."""

import numpy as np
import pytest

from invgen import (
    InputError,
    Perm,
    PreconditionError,
    abelian_crown,
    abelian_crown_power_with_embedding,
    build_crown_power_general,
    chief_series,
    corona_decomposition,
    crown_of_factor,
    crown_power_from_descriptor,
    factors_equivalent,
    load_group,
    module_from_descriptor,
    verify_sotto,
)
from invgen.subgroups import frattini, minimal_normal_subgroups, subgroup_lattice

S3_GL22 = {
    "group": {"family": "sym", "n": 3},
    "p": 2,
    "matrices": [[[1, 0], [1, 1]], [[0, 1], [1, 1]]],
}


def test_chief_series_s4(s4):
    series = chief_series(s4)
    assert [f.order for f in series] == [4, 3, 2]
    assert all(f.is_abelian and not f.is_frattini for f in series)
    # consecutive sections share their boundary subgroups
    assert series[0].lower.order == 1
    for a, b in zip(series, series[1:]):
        assert a.upper.bits == b.lower.bits
    assert series[-1].upper.order == 24


def test_chief_series_order_product(s4):
    for desc in (
        {"family": "sym", "n": 4},
        {"family": "cyclic", "n": 12},
        {"family": "dihedral", "n": 6},
        {"family": "alt", "n": 5},
    ):
        G = load_group(desc)
        prod = 1
        for f in chief_series(G):
            prod *= f.order
        assert prod == G.order


def test_s4_crowns(s4):
    series = chief_series(s4)
    expected = {4: (1, 1, 4), 3: (1, 4, 12), 2: (1, 12, 24)}
    for f in series:
        cr = crown_of_factor(s4, f)
        delta, r, i = expected[f.order]
        assert cr.delta == delta
        assert cr.R.order == r
        assert cr.I.order == i


def test_c6_crowns():
    c6 = load_group({"family": "cyclic", "n": 6})
    for f in chief_series(c6):
        cr = abelian_crown(c6, f)
        assert cr.delta == 1
        assert cr.I.order == 6
        assert cr.R.order == 6 // f.order


def test_elementary_abelian_crown_counts_all_factors():
    e16 = load_group({"family": "elemab", "p": 2, "k": 4})
    series = chief_series(e16)
    assert len(series) == 4
    cr = abelian_crown(e16, series[0])
    assert cr.delta == 4
    assert cr.R.order == 1
    assert cr.I.order == 16
    # every pair of factors is equivalent here
    for f in series[1:]:
        assert factors_equivalent(e16, series[0], f)


def test_factors_inequivalent_across_orders(s4):
    series = chief_series(s4)
    assert not factors_equivalent(s4, series[0], series[1])


def test_nonabelian_factor_crown():
    a5 = load_group({"family": "alt", "n": 5})
    (f,) = chief_series(a5)
    assert not f.is_abelian
    with pytest.raises(PreconditionError):
        abelian_crown(a5, f)
    cr = crown_of_factor(a5, f)
    assert cr.delta == 1
    assert cr.R.order == 1
    assert cr.I.order == 60


def test_frattini_factor_has_no_crown():
    c4 = load_group({"family": "cyclic", "n": 4})
    bottom = chief_series(c4)[0]
    assert bottom.is_frattini
    with pytest.raises(PreconditionError):
        abelian_crown(c4, bottom)


def test_corona_s4(s4):
    cor = corona_decomposition(s4)
    assert (cor.factor.order, cor.delta) == (4, 1)
    assert (cor.R.order, cor.I.order, cor.U.order) == (1, 4, 4)
    assert cor.U.order * cor.R.order == cor.I.order
    assert cor.U.bits & cor.R.bits == 1  # intersect in the identity


def test_corona_requires_trivial_frattini():
    with pytest.raises(PreconditionError):
        corona_decomposition(load_group({"family": "cyclic", "n": 4}))
    with pytest.raises(PreconditionError):
        corona_decomposition(load_group({"family": "cyclic", "n": 1}))


def test_sotto_on_all_s4_subgroup_classes(s4):
    cor = corona_decomposition(s4)
    for rep in subgroup_lattice(s4):
        assert verify_sotto(s4, cor, rep)


def test_sotto_needs_a_complement(s4):
    series = chief_series(s4)
    cr = crown_of_factor(s4, series[1])  # no U attached
    whole = max(subgroup_lattice(s4), key=lambda rec: rec.order)
    with pytest.raises(PreconditionError):
        verify_sotto(s4, cr, whole)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_crown_power_order_law_s3(k):
    s3 = load_group({"family": "sym", "n": 3})
    (a3,) = minimal_normal_subgroups(s3)
    Lk = build_crown_power_general(s3, a3, k)
    assert Lk.order == a3.order ** (k - 1) * s3.order
    if k == 1:
        assert Lk is s3


def test_crown_power_coordinate_copies_not_alone():
    # with an abelian socle the k coordinate copies are minimal normal
    # subgroups but never the only ones: diagonals join them
    s4 = load_group({"family": "sym", "n": 4})
    (v4,) = minimal_normal_subgroups(s4)
    L2 = build_crown_power_general(s4, v4, 2)
    assert L2.order == 96
    mins = minimal_normal_subgroups(L2)
    assert sorted(m.order for m in mins) == [4, 4, 4]


def test_crown_power_rejects_bad_socle():
    c6 = load_group({"family": "cyclic", "n": 6})
    mins = minimal_normal_subgroups(c6)
    assert len(mins) == 2  # C2 and C3: not monolithic
    with pytest.raises(InputError):
        build_crown_power_general(c6, mins[0], 2)
    s3 = load_group({"family": "sym", "n": 3})
    (a3,) = minimal_normal_subgroups(s3)
    with pytest.raises(InputError):
        build_crown_power_general(s3, a3, 0)


def test_crown_power_descriptors():
    g = crown_power_from_descriptor(
        {"crownpower": {"module": S3_GL22, "u": 2}}
    )
    assert g.order == 4**2 * 6
    h = crown_power_from_descriptor(
        {"crownpower_general": {"group": {"family": "sym", "n": 3}, "k": 2}}
    )
    assert h.order == 18
    with pytest.raises(InputError):
        crown_power_from_descriptor({"something_else": {}})


def test_embedding_is_a_homomorphism():
    act = module_from_descriptor(S3_GL22)
    GA, emb = abelian_crown_power_with_embedding(act, 2)
    assert GA.order == 96
    H = act.group
    rng = np.random.default_rng(7)
    for _ in range(20):
        v1 = rng.integers(0, 2, size=4)
        v2 = rng.integers(0, 2, size=4)
        h1 = int(rng.integers(0, H.order))
        h2 = int(rng.integers(0, H.order))
        m2 = np.kron(np.eye(2, dtype=np.int64), act.matrix(h2))
        lhs = emb(v1, h1) * emb(v2, h2)
        rhs = emb((v1 @ m2 + v2) % 2, int(H.table[h1, h2]))
        assert lhs == rhs


def test_frattini_values():
    assert frattini(load_group({"family": "cyclic", "n": 4})).order == 2
    assert frattini(load_group({"family": "sym", "n": 4})).order == 1
    assert frattini(load_group({"family": "cyclic", "n": 12})).order == 2
