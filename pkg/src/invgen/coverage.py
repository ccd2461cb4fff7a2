"""Conjugacy-class coverage by maximal subgroups.

The union of all conjugates of a subgroup M of G is a union of conjugacy
classes, namely the classes that meet M.  A tuple of elements invariably
generates G exactly when no maximal subgroup covers the class of every
entry, so everything downstream (exact Chebotarev values, Monte Carlo
runs, the survey) only needs one table per group: for each conjugacy
class of maximal subgroups, the set of element classes covered.

Tables can be cached on disk; point INVGEN_CACHE_DIR at a directory to
enable it.  The cache key is a hash of the group's canonical descriptor,
so two differently-constructed copies of the same permutation group
share an entry.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapExceeded, InputError
from .group import Group
from .perm import Perm
from .subgroups import SubgroupRecord, _lattice, closure_indices, subgroup_conjugates

CACHE_ENV = "INVGEN_CACHE_DIR"

# exhaustive mode enumerates |class(g_2)| * ... * |class(g_k)| tuples
EXHAUSTIVE_TUPLE_CAP = 200_000


@dataclass(frozen=True)
class ClassCoverageTable:
    """Coverage of element classes by maximal-subgroup classes.

    covers[m] is an int bitmask over element-class indices: bit c is set
    when class c meets the m-th maximal subgroup (equivalently, lies in
    the union of its conjugates).  Class indices follow
    Group.conjugacy_classes() order, so the identity class is bit 0.
    """

    order: int
    class_sizes: tuple[int, ...]
    class_orders: tuple[int, ...]
    maximal_orders: tuple[int, ...]
    maximal_counts: tuple[int, ...]
    covers: tuple[int, ...]

    @property
    def num_classes(self) -> int:
        return len(self.class_sizes)

    @property
    def num_maximal_classes(self) -> int:
        return len(self.covers)

    def covered_elements(self, m: int) -> int:
        """Number of group elements lying in some conjugate of maximal m."""
        total = 0
        mask = self.covers[m]
        while mask:
            low = mask & -mask
            total += self.class_sizes[low.bit_length() - 1]
            mask ^= low
        return total

    def fixed_point_free(self, m: int) -> Fraction:
        """Proportion of G avoiding every conjugate of the m-th maximal.

        This is the fixed-point-free proportion for the action of G on
        the cosets of that subgroup.
        """
        return Fraction(self.order - self.covered_elements(m), self.order)

    def to_json(self) -> dict:
        nc = self.num_classes
        return {
            "order": self.order,
            "class_sizes": list(self.class_sizes),
            "class_orders": list(self.class_orders),
            "maximal_orders": list(self.maximal_orders),
            "maximal_counts": list(self.maximal_counts),
            "covers": [
                [c for c in range(nc) if (mask >> c) & 1] for mask in self.covers
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ClassCoverageTable":
        covers = tuple(
            sum(1 << c for c in cover) for cover in data["covers"]
        )
        return cls(
            order=int(data["order"]),
            class_sizes=tuple(int(s) for s in data["class_sizes"]),
            class_orders=tuple(int(s) for s in data["class_orders"]),
            maximal_orders=tuple(int(s) for s in data["maximal_orders"]),
            maximal_counts=tuple(int(s) for s in data["maximal_counts"]),
            covers=covers,
        )


def _cache_path(G: Group):
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(G.canonical_key().encode()).hexdigest()
    return os.path.join(root, digest + ".json")


def _compute_table(G: Group) -> ClassCoverageTable:
    classes = G.conjugacy_classes()
    class_of = G.class_of()
    lat = _lattice(G)
    maximal = [
        (rep, len(orbit)) for rep, orbit in lat.classes if rep.is_maximal
    ]
    maximal.sort(key=lambda pair: (pair[0].order, pair[0].bits))
    covers = []
    for rep, _ in maximal:
        hit = np.unique(class_of[rep.member_indices()])
        covers.append(int(sum(1 << int(c) for c in hit)))
    return ClassCoverageTable(
        order=G.order,
        class_sizes=tuple(c.size for c in classes),
        class_orders=tuple(G.elements[c.rep].order() for c in classes),
        maximal_orders=tuple(rep.order for rep, _ in maximal),
        maximal_counts=tuple(cnt for _, cnt in maximal),
        covers=tuple(covers),
    )


def coverage_table(G: Group, use_cache: bool = True) -> ClassCoverageTable:
    """Coverage table for G, from the in-memory or on-disk cache if possible."""
    if G._coverage is not None:
        return G._coverage
    path = _cache_path(G) if use_cache else None
    if path and os.path.exists(path):
        try:
            with open(path) as fh:
                data = json.load(fh)
            table = ClassCoverageTable.from_json(data)
            if table.order == G.order:
                G._coverage = table
                return table
        except (ValueError, KeyError, OSError):
            pass  # corrupt entry: fall through and recompute
    table = _compute_table(G)
    if path:
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(table.to_json(), fh)
        os.replace(tmp, path)
    G._coverage = table
    return table


def _element_indices(G: Group, elements) -> list[int]:
    out = []
    for e in elements:
        if isinstance(e, Perm):
            out.append(G.element_index(e))
        else:
            i = int(e)
            if not 0 <= i < G.order:
                raise InputError(f"element index {i} out of range for order {G.order}")
            out.append(i)
    return out


def invariably_generates(G: Group, elements, exhaustive: bool = False) -> bool:
    """Whether the tuple invariably generates G.

    A tuple (g_1, ..., g_k) invariably generates when every choice of
    conjugates (g_1^{x_1}, ..., g_k^{x_k}) generates G.  The default
    test is the class-coverage criterion: the tuple fails exactly when
    some maximal subgroup covers the class of every entry.  With
    exhaustive=True the definition is checked literally, fixing the
    first entry (conjugating the whole tuple changes nothing) and
    running over all conjugates of the rest.
    """
    idxs = _element_indices(G, elements)
    if G.order == 1:
        return True
    if not idxs:
        return False
    if exhaustive:
        return _invariably_generates_exhaustive(G, idxs)
    class_of = G.class_of()
    need = 0
    for i in idxs:
        need |= 1 << int(class_of[i])
    table = coverage_table(G)
    return not any((cover & need) == need for cover in table.covers)


def _invariably_generates_exhaustive(G: Group, idxs) -> bool:
    classes = G.conjugacy_classes()
    class_of = G.class_of()
    member_lists = []
    total = 1
    for i in idxs[1:]:
        members = list(classes[int(class_of[i])].member_indices())
        total *= len(members)
        if total > EXHAUSTIVE_TUPLE_CAP:
            raise CapExceeded(
                f"exhaustive check needs {total}+ tuples, cap is"
                f" {EXHAUSTIVE_TUPLE_CAP} (exhaustive)"
            )
        member_lists.append(members)
    first = idxs[0]
    n = G.order
    for rest in itertools.product(*member_lists):
        if len(closure_indices(G, (first,) + rest)) != n:
            return False
    return True


def invariable_generation_probability_profile(G: Group):
    """(class_sizes, covers) pair used by the exact and Monte Carlo engines."""
    table = coverage_table(G)
    return table.class_sizes, table.covers


def fpf_proportion(G: Group, M: SubgroupRecord) -> Fraction:
    """Proportion of G acting without fixed points on the cosets of M.

    g fixes the coset Mx exactly when g lies in M^x, so this equals
    1 - |union of all conjugates of M| / |G|.  The union is taken over
    the actual conjugate member sets, not read off the class table, so
    the two routes can be checked against each other.
    """
    if M.order >= G.order:
        raise InputError("fpf proportion needs a proper subgroup")
    union = 0
    for rec in subgroup_conjugates(G, M):
        union |= rec.bits
    return Fraction(G.order - union.bit_count(), G.order)


def coverage_to_csv(table: ClassCoverageTable, fh) -> None:
    """Write one row per maximal-subgroup class.

    Columns: subgroup order, number of conjugates, count of covered
    element classes, count of covered elements, fixed-point-free
    proportion, and the covered class indices joined with spaces.
    """
    writer = csv.writer(fh)
    writer.writerow(
        [
            "maximal_order",
            "conjugates",
            "covered_classes",
            "covered_elements",
            "fixed_point_free",
            "class_indices",
        ]
    )
    nc = table.num_classes
    for m in range(table.num_maximal_classes):
        idxs = [c for c in range(nc) if (table.covers[m] >> c) & 1]
        writer.writerow(
            [
                table.maximal_orders[m],
                table.maximal_counts[m],
                len(idxs),
                table.covered_elements(m),
                str(table.fixed_point_free(m)),
                " ".join(str(c) for c in idxs),
            ]
        )
