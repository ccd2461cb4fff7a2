"""Linear criteria for generation of V^u semidirect H by lifted tuples."""

import json

import numpy as np
import pytest

from invgen import (
    MODE_GENERATE,
    MODE_INVARIABLE,
    InputError,
    LiftProblem,
    PreconditionError,
    build_dw,
    dimen_bound_check,
    gen_criterion,
    invgen_criterion,
    lift_problem_from_descriptor,
    max_lift_rank,
    module_from_descriptor,
    resolve_word,
)
from invgen.harness import shipped_corpus_path

S3_GL22 = {
    "group": {"family": "sym", "n": 3},
    "p": 2,
    "matrices": [[[1, 0], [1, 1]], [[0, 1], [1, 1]]],
}


def _act(name):
    with open(shipped_corpus_path()) as fh:
        for line in fh:
            d = json.loads(line)
            if d.get("name") == name:
                return module_from_descriptor(d["module"])
    raise KeyError(name)


def _gen_indices(act):
    return list(act.group.gen_indices)


def test_dw_dimensions_s3():
    act = module_from_descriptor(S3_GL22)
    hs = _gen_indices(act)
    dw = build_dw(act, hs)
    assert (dw.n, dw.m, dw.e) == (2, 0, 1)
    assert dw.dim_d_f == dw.n + dw.m == 2
    # the involution fixes a line (contributes 1), the 3-element none (2)
    assert dw.dim_w_f == 3
    assert dw.D.ambient == dw.ambient == len(hs) * act.dim
    assert dw.sum.dim == dw.dim_dw_f * dw.e


def test_build_dw_requires_generating_tuple():
    act = module_from_descriptor(S3_GL22)
    # a single involution generates only C2 < S3
    invol = next(
        i for i in _gen_indices(act) if act.group.elements[i].order() == 2
    )
    with pytest.raises(PreconditionError):
        build_dw(act, [invol])


def test_build_dw_rejects_trivial_action():
    act = module_from_descriptor(
        {"group": {"family": "cyclic", "n": 2}, "p": 3, "matrices": [[[1]]]}
    )
    with pytest.raises(PreconditionError):
        build_dw(act, _gen_indices(act))


@pytest.mark.parametrize(
    "name,u_gen,u_inv",
    [
        ("mod_s3_gl22", 2, 1),
        ("mod_d4_gf3", 2, 1),
        ("mod_s3_gf7", 2, 1),
        ("mod_c2_gf3", 0, 0),
        ("mod_c4_gf5", 0, 0),
    ],
)
def test_max_lift_rank_goldens(name, u_gen, u_inv):
    act = _act(name)
    hs = _gen_indices(act)
    gen = max_lift_rank(act, hs, MODE_GENERATE)
    inv = max_lift_rank(act, hs, MODE_INVARIABLE)
    assert gen.u_max == u_gen
    assert inv.u_max == u_inv
    assert inv.u_max <= gen.u_max


def test_max_lift_rank_grows_with_repeats():
    # one generator can never lift (u_max = 0); repeats add W summands
    act = _act("mod_c2_gf3")
    (h,) = _gen_indices(act)
    single = max_lift_rank(act, [h], MODE_GENERATE)
    assert single.u_max == 0
    assert single.ws.shape == (1, 0, act.dim)
    assert max_lift_rank(act, [h, h], MODE_GENERATE).u_max == 1
    assert max_lift_rank(act, [h, h, h], MODE_GENERATE).u_max == 2
    # every lift of an involution here is an involution, so no tuple of
    # them can invariably generate the ambient S3 at any u >= 1
    assert max_lift_rank(act, [h, h, h], MODE_INVARIABLE).u_max == 0


def test_invariable_mode_requires_invariably_generating_tuple():
    act = _act("mod_sl24_nat")
    G = act.group
    # the stored generators have orders 2 and 5; both classes meet a
    # dihedral subgroup, so they do not invariably generate
    with pytest.raises(PreconditionError):
        max_lift_rank(act, list(G.gen_indices), MODE_INVARIABLE)
    o3 = next(i for i, g in enumerate(G.elements) if g.order() == 3)
    o5 = next(i for i, g in enumerate(G.elements) if g.order() == 5)
    assert max_lift_rank(act, [o3, o5], MODE_GENERATE).u_max == 1
    assert max_lift_rank(act, [o3, o5], MODE_INVARIABLE).u_max == 0


def test_witness_tuple_passes_criterion():
    act = module_from_descriptor(S3_GL22)
    hs = _gen_indices(act)
    res = max_lift_rank(act, hs, MODE_GENERATE)
    assert res.u_max == 2
    prob = LiftProblem(act=act, u=res.u_max, hs=hs, ws=res.ws)
    assert gen_criterion(prob)


def test_gen_criterion_known_instance():
    act = module_from_descriptor(S3_GL22)
    hs = _gen_indices(act)
    good = LiftProblem(
        act=act, u=1, hs=hs, ws=np.array([[[1, 0]], [[0, 0]]], dtype=np.int64)
    )
    assert gen_criterion(good)
    assert not invgen_criterion(good)
    zero = LiftProblem(
        act=act, u=1, hs=hs, ws=np.zeros((2, 1, 2), dtype=np.int64)
    )
    # zero translation parts leave the complement H intact
    assert not gen_criterion(zero)


def test_dimension_bound_holds_on_corpus_modules():
    for name in ("mod_s3_gl22", "mod_d4_gf3", "mod_s3_gf7", "mod_sl24_nat"):
        act = _act(name)
        lhs, rhs, holds = dimen_bound_check(act, _gen_indices(act))
        assert holds
        assert lhs >= rhs


def test_resolve_word_signed_generators():
    act = module_from_descriptor(S3_GL22)
    G = act.group
    g1, g2 = G.gen_indices
    assert resolve_word(act, [1]) == g1
    assert resolve_word(act, [2]) == g2
    assert resolve_word(act, [1, -1]) == 0
    prod = G.table[g1, g2]
    assert resolve_word(act, [1, 2]) == prod
    with pytest.raises(InputError):
        resolve_word(act, [3])
    with pytest.raises(InputError):
        resolve_word(act, [0])


def test_lift_problem_descriptor_round_trip():
    desc = {
        "module": S3_GL22,
        "u": 1,
        "hs": [[1], [2]],
        "ws": [[[1, 0]], [[0, 0]]],
    }
    prob = lift_problem_from_descriptor(desc)
    assert prob.u == 1
    assert gen_criterion(prob)
    bad = dict(desc, ws=[[[1, 0]]])  # wrong tuple length
    with pytest.raises(InputError):
        lift_problem_from_descriptor(bad)
