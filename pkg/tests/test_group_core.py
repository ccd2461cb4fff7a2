"""Permutations, multiplication tables, classes, descriptors."""

import numpy as np
import pytest

from invgen import Caps, Group, InputError, Perm, load_group


def test_perm_composition_is_left_to_right():
    a = Perm((1, 0, 2))  # swap first two points
    b = Perm((0, 2, 1))  # swap last two
    ab = a * b
    # (a*b)(x) = b(a(x)): point 0 goes 0->1->2
    assert ab(0) == 2
    assert (b * a)(0) == 1


def test_perm_inverse_and_order():
    c = Perm((1, 2, 3, 0))
    assert c * c.inverse() == Perm.identity(4)
    assert c.order() == 4
    assert Perm.identity(4).order() == 1


def test_perm_one_based_round_trip():
    p = Perm.from_one_based([2, 3, 1])
    assert p.images == (1, 2, 0)
    assert p.one_based() == [2, 3, 1]


def test_perm_conjugation_operator():
    g = Perm((1, 0, 2))
    x = Perm((2, 0, 1))
    assert g**x == x.inverse() * g * x


def test_perm_from_cycles():
    p = Perm.from_cycles([(0, 1, 2)], 4)
    assert p.images == (1, 2, 0, 3)
    with pytest.raises(InputError):
        Perm.from_cycles([(0, 1), (1, 2)], 3)  # overlapping support


def test_one_based_parser_rejects_non_bijections():
    with pytest.raises(InputError):
        Perm.from_one_based([1, 1, 2])
    with pytest.raises(InputError):
        Perm.from_one_based([1, 6, 2])


def test_s3_table_consistency(s3):
    assert s3.order == 6
    t = s3.table
    e = 0
    assert all(t[e, g] == g for g in range(6))
    for g in range(6):
        assert t[g, s3.inv_index(g)] == e
        assert s3.mult_index(g, s3.inv_index(g)) == e
    # associativity on a sample of triples
    rng = np.random.default_rng(0)
    for _ in range(50):
        a, b, c = rng.integers(0, 6, size=3)
        assert t[t[a, b], c] == t[a, t[b, c]]


def test_conjugacy_classes_partition(s4):
    classes = s4.conjugacy_classes()
    sizes = sorted(c.size for c in classes)
    assert sizes == [1, 3, 6, 6, 8]
    union = 0
    for c in classes:
        assert union & c.members == 0
        union |= c.members
    assert union == (1 << s4.order) - 1
    class_of = s4.class_of()
    for ci, c in enumerate(classes):
        assert all(class_of[i] == ci for i in c.member_indices())


def test_class_of_constant_under_conjugation(s3):
    class_of = s3.class_of()
    t = s3.table
    for g in range(s3.order):
        for x in range(s3.order):
            gx = t[t[s3.inv_index(x), g], x]
            assert class_of[gx] == class_of[g]


@pytest.mark.parametrize(
    "desc,order",
    [
        ({"family": "sym", "n": 4}, 24),
        ({"family": "alt", "n": 5}, 60),
        ({"family": "cyclic", "n": 12}, 12),
        ({"family": "dihedral", "n": 6}, 12),
        ({"family": "elemab", "p": 2, "k": 3}, 8),
        ({"family": "agl1", "q": 8}, 56),
        ({"family": "agl1", "q": 9}, 72),
    ],
)
def test_family_orders(desc, order):
    assert load_group(desc).order == order


def test_explicit_generator_descriptor():
    # quaternion group on its regular representation, 1-based images
    q8 = load_group(
        {
            "name": "Q8",
            "degree": 8,
            "generators": [[3, 4, 2, 1, 8, 7, 5, 6], [5, 6, 7, 8, 2, 1, 4, 3]],
        }
    )
    assert q8.order == 8
    assert q8.name == "Q8"
    orders = sorted(g.order() for g in q8.elements)
    assert orders == [1, 2, 4, 4, 4, 4, 4, 4]


def test_descriptor_validation():
    with pytest.raises(InputError):
        load_group({"family": "nope", "n": 3})
    with pytest.raises(InputError):
        load_group({"family": "sym"})
    with pytest.raises(InputError):
        load_group({"family": "elemab", "p": 4, "k": 1})
    with pytest.raises(InputError):
        load_group({"family": "agl1", "q": 6})
    with pytest.raises(InputError):
        load_group([])


def test_degree_cap_enforced():
    from invgen import CapExceeded

    with pytest.raises(CapExceeded):
        load_group({"family": "sym", "n": 99})
    # a loosened cap admits larger degrees
    g = load_group({"family": "cyclic", "n": 70}, caps=Caps(degree=128))
    assert g.order == 70


def test_canonical_key_is_representation_stable():
    a = load_group({"family": "sym", "n": 3})
    b = load_group({"family": "sym", "n": 3})
    assert a.canonical_key() == b.canonical_key()
    assert a.canonical_key() != load_group({"family": "cyclic", "n": 6}).canonical_key()


def test_element_index_round_trip(s3):
    for i, g in enumerate(s3.elements):
        assert s3.element_index(g) == i
    with pytest.raises(InputError):
        s3.element_index(Perm((1, 0, 2, 3)))  # wrong degree
