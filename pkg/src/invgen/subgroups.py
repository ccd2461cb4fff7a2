"""Subgroup enumeration and quotients, all at multiplication-table scale.

Subgroups are identified by membership bitsets (Python ints over element
indices).  The lattice is built bottom-up: seed with the prime-power
cyclic subgroups, then repeatedly join class representatives with cyclic
subgroups until no new conjugacy class of subgroups appears.  Every
subgroup is generated by its prime-power cyclic subgroups and joining a
class representative with *all* cyclic partners finds a conjugate of
every extension, so the closure is complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CapExceeded, InputError, PreconditionError
from .group import Group, bit_indices
from .perm import Perm

# ---------------------------------------------------------------------------
# bitset helpers


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def indices_to_bits(indices, n: int) -> int:
    mask = np.zeros(n, dtype=bool)
    mask[np.asarray(indices, dtype=np.int64)] = True
    return mask_to_bits(mask)


def bits_to_indices(bits: int, n: int) -> np.ndarray:
    raw = bits.to_bytes((n + 7) // 8, "little")
    mask = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), count=n, bitorder="little")
    return np.flatnonzero(mask)


def popcount(bits: int) -> int:
    return bits.bit_count()


# ---------------------------------------------------------------------------


@dataclass
class SubgroupRecord:
    group: Group
    bits: int
    order: int
    gens: tuple  # element indices generating the subgroup
    is_maximal: bool | None = None
    is_normal: bool | None = None
    _members: np.ndarray | None = field(default=None, repr=False)

    def member_indices(self) -> np.ndarray:
        if self._members is None:
            self._members = bits_to_indices(self.bits, self.group.order)
        return self._members

    @property
    def index(self) -> int:
        return self.group.order // self.order

    def contains(self, elem_index: int) -> bool:
        return bool((self.bits >> int(elem_index)) & 1)

    def contains_subgroup(self, other: "SubgroupRecord") -> bool:
        return (self.bits & other.bits) == other.bits

    def is_whole_group(self) -> bool:
        return self.order == self.group.order

    def elements(self):
        return [self.group.elements[i] for i in self.member_indices()]

    def __eq__(self, other):
        return isinstance(other, SubgroupRecord) and self.bits == other.bits

    def __hash__(self):
        return hash(self.bits)

    def __repr__(self):
        return f"Subgroup(order={self.order} of {self.group.name})"


def _record(G: Group, member_idx, gens) -> SubgroupRecord:
    member_idx = np.asarray(member_idx, dtype=np.int64)
    return SubgroupRecord(
        group=G,
        bits=indices_to_bits(member_idx, G.order),
        order=len(member_idx),
        gens=tuple(int(g) for g in gens),
        _members=np.sort(member_idx),
    )


# ---------------------------------------------------------------------------
# closures over the index table


def closure_indices(G: Group, gen_idxs, early_full=True) -> np.ndarray:
    """Member indices of <gens>.  A partial count above |G|/2 forces the
    whole group, so the scan can stop early."""
    t = G.table
    n = G.order
    gen_idxs = [int(g) for g in gen_idxs if g != 0]
    if not gen_idxs:
        return np.array([0], dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    count = 1
    frontier = np.array([0], dtype=np.int64)
    while frontier.size:
        prods = t[frontier][:, gen_idxs].ravel()
        prods = prods[~seen[prods]]
        if prods.size == 0:
            break
        new = np.unique(prods)
        seen[new] = True
        count += new.size
        if early_full and 2 * count > n:
            return np.arange(n, dtype=np.int64)
        frontier = new
    return np.flatnonzero(seen).astype(np.int64)


def generated_subgroup(G: Group, elems) -> SubgroupRecord:
    """Subgroup generated by elements (Perms or element indices)."""
    idxs = [e if isinstance(e, (int, np.integer)) else G.element_index(e) for e in elems]
    if G.order <= G.caps.lattice:
        members = closure_indices(G, idxs, early_full=False)
    else:
        members = _closure_perm(G, idxs)
    return _record(G, members, [i for i in idxs if i != 0])


def _closure_perm(G: Group, idxs):
    """Closure without the index table (large groups)."""
    gens = [G.elements[i] for i in idxs if i != 0]
    if not gens:
        return [0]
    seen = {G.elements[0].images}
    frontier = [G.elements[0]]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a * g
                if b.images not in seen:
                    seen.add(b.images)
                    nxt.append(b)
        frontier = nxt
    return sorted(G.index[im] for im in seen)


def small_generating_set(G: Group, member_idx) -> tuple:
    """Greedy generating set for the subgroup with the given members."""
    members = np.sort(np.asarray(member_idx, dtype=np.int64))
    target = len(members)
    if target == 1:
        return ()
    gens: list[int] = []
    current = {0}
    for i in members:
        i = int(i)
        if i in current:
            continue
        gens.append(i)
        current = set(closure_indices(G, gens, early_full=False).tolist())
        if len(current) == target:
            break
    return tuple(gens)


# ---------------------------------------------------------------------------
# subgroup lattice


class SubgroupLattice:
    def __init__(self, G: Group, classes):
        self.group = G
        # classes: list of (rep SubgroupRecord, [conjugate SubgroupRecords])
        self.classes = classes

    def all_subgroups(self):
        out = []
        for rep, orbit in self.classes:
            out.extend(orbit)
        out.sort(key=lambda r: (r.order, r.bits))
        return out

    def class_reps(self):
        return [rep for rep, _ in self.classes]


def _conjugate_orbit(G: Group, rec: SubgroupRecord, conj_maps):
    """All conjugates of rec, as records with conjugated generators."""
    orbit = {rec.bits: rec}
    frontier = [rec]
    while frontier:
        nxt = []
        for r in frontier:
            for cm in conj_maps:
                members = cm[r.member_indices()]
                bits = indices_to_bits(members, G.order)
                if bits not in orbit:
                    conj = _record(G, members, [int(cm[g]) for g in r.gens])
                    orbit[bits] = conj
                    nxt.append(conj)
        frontier = nxt
    return [orbit[b] for b in sorted(orbit)]


def _cyclic_subgroups_prime_power(G: Group):
    """Distinct prime-power cyclic subgroups, each with one generator."""
    t = G.table
    seen = {}
    for i in range(1, G.order):
        members = [0]
        x = i
        while x != 0:
            members.append(x)
            x = int(t[x, i])
        k = len(members)
        # keep only prime-power orders; they generate everything by joins
        p = min(f for f in range(2, k + 1) if k % f == 0)
        kk = k
        while kk % p == 0:
            kk //= p
        if kk != 1:
            continue
        bits = indices_to_bits(members, G.order)
        if bits not in seen:
            seen[bits] = _record(G, members, (i,))
    return [seen[b] for b in sorted(seen)]


def subgroup_lattice(G: Group) -> list[SubgroupRecord]:
    """Every subgroup of G, each exactly once, sorted by (order, bitset)."""
    return _lattice(G).all_subgroups()


def _lattice(G: Group) -> SubgroupLattice:
    if G._lattice is not None:
        return G._lattice
    if G.order > G.caps.lattice:
        raise CapExceeded(
            f"order {G.order} exceeds lattice cap {G.caps.lattice} (lattice)"
        )
    n = G.order
    trivial = _record(G, [0], ())
    if n == 1:
        lat = SubgroupLattice(G, [(trivial, [trivial])])
        G._lattice = lat
        return lat
    conj_maps = G.conj_maps()
    cyclics = _cyclic_subgroups_prime_power(G)
    whole = _record(G, np.arange(n), tuple(G.gen_indices))

    seen_bits = {trivial.bits, whole.bits}
    classes = [(trivial, [trivial]), (whole, [whole])]
    work: list[SubgroupRecord] = []

    def admit(rec: SubgroupRecord):
        if rec.bits in seen_bits:
            return
        orbit = _conjugate_orbit(G, rec, conj_maps)
        rep = orbit[0]
        for r in orbit:
            seen_bits.add(r.bits)
        classes.append((rep, orbit))
        work.append(rep)

    for c in cyclics:
        admit(c)

    wi = 0
    while wi < len(work):
        H = work[wi]
        wi += 1
        for c in cyclics:
            if (H.bits & c.bits) == c.bits:
                continue
            # order lower bound |H||c| / |H ∩ c|: skip straight to G
            inter = popcount(H.bits & c.bits)
            bound = H.order * c.order // inter
            if 2 * bound > n:
                continue  # join is G, already admitted
            members = closure_indices(G, H.gens + c.gens)
            if 2 * len(members) > n:
                continue
            admit(_record(G, members, H.gens + c.gens))

    # maximality and normality flags
    classes.sort(key=lambda pair: (pair[0].order, pair[0].bits))
    by_order: dict[int, list[int]] = {}
    for rep, orbit in classes:
        by_order.setdefault(rep.order, []).extend(r.bits for r in orbit)
    orders = sorted(by_order)
    for rep, orbit in classes:
        if rep.order == n:
            maximal = False
        else:
            maximal = True
            for d in orders:
                if d <= rep.order or d == n or d % rep.order:
                    continue
                if any((rep.bits & b) == rep.bits for b in by_order[d]):
                    maximal = False
                    break
        normal = len(orbit) == 1
        for r in orbit:
            r.is_maximal = maximal
            r.is_normal = normal
    lat = SubgroupLattice(G, classes)
    G._lattice = lat
    return lat


def maximal_subgroups_up_to_conjugacy(G: Group) -> list[SubgroupRecord]:
    """One representative per conjugacy class of maximal subgroups."""
    lat = _lattice(G)
    reps = [rep for rep, _ in lat.classes if rep.is_maximal]
    reps.sort(key=lambda r: (r.order, r.bits))
    return reps


def subgroup_conjugates(G: Group, rec: SubgroupRecord) -> list[SubgroupRecord]:
    lat = G._lattice
    if lat is not None:
        for rep, orbit in lat.classes:
            if any(r.bits == rec.bits for r in orbit):
                return orbit
    return _conjugate_orbit(G, rec, G.conj_maps())


def frattini(G: Group) -> SubgroupRecord:
    """Intersection of all maximal subgroups."""
    lat = _lattice(G)
    if G.order == 1:
        return lat.classes[0][0]
    bits = (1 << G.order) - 1
    for rep, orbit in lat.classes:
        if rep.is_maximal:
            for r in orbit:
                bits &= r.bits
    members = bits_to_indices(bits, G.order)
    return _record(G, members, small_generating_set(G, members))


# ---------------------------------------------------------------------------
# normal subgroups (cheaper than the full lattice)


def _normal_closure(G: Group, seed_idxs) -> np.ndarray:
    conj_maps = G.conj_maps()
    gens = set(int(i) for i in seed_idxs if i != 0)
    while True:
        members = closure_indices(G, sorted(gens), early_full=False)
        bits = indices_to_bits(members, G.order)
        missing = set()
        for cm in conj_maps:
            image = cm[members]
            if indices_to_bits(image, G.order) != bits:
                inside = np.zeros(G.order, dtype=bool)
                inside[members] = True
                missing.update(int(x) for x in image[~inside[image]])
        if not missing:
            return members
        gens |= missing


def normal_subgroups(G: Group) -> list[SubgroupRecord]:
    """All normal subgroups, via joins of conjugacy-class closures."""
    if G._normals is not None:
        return G._normals
    if G.order > G.caps.lattice:
        raise CapExceeded(
            f"order {G.order} exceeds lattice cap {G.caps.lattice} (normal subgroups)"
        )
    trivial = _record(G, [0], ())
    found = {trivial.bits: trivial}
    classes = G.conjugacy_classes()
    queue = [trivial]
    while queue:
        N = queue.pop()
        for c in classes[1:]:
            if (N.bits & c.members) == c.members:
                continue
            members = _normal_closure(G, N.gens + (c.rep,))
            # witness gens only give the normal closure; records must carry
            # a set generating the subgroup itself
            rec = _record(G, members, small_generating_set(G, members))
            if rec.bits not in found:
                rec.is_normal = True
                found[rec.bits] = rec
                if rec.order < G.order:
                    queue.append(rec)
    out = sorted(found.values(), key=lambda r: (r.order, r.bits))
    for r in out:
        r.is_normal = True
    G._normals = out
    return out


def minimal_normal_subgroups(G: Group) -> list[SubgroupRecord]:
    normals = [r for r in normal_subgroups(G) if 1 < r.order]
    out = []
    for r in normals:
        if r.order == G.order and len(normals) > 1:
            continue
        if not any(
            s.order < r.order and (r.bits & s.bits) == s.bits and s.order > 1
            for s in normals
        ):
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# centralizer


def centralizer(G: Group, elems) -> SubgroupRecord:
    """Centralizer of a set of elements (Perms or indices)."""
    idxs = [e if isinstance(e, (int, np.integer)) else G.element_index(e) for e in elems]
    if G.order <= G.caps.lattice:
        t = G.table
        mask = np.ones(G.order, dtype=bool)
        for s in idxs:
            mask &= t[:, s] == t[s, :]
        members = np.flatnonzero(mask).astype(np.int64)
    else:
        targets = [G.elements[i] for i in idxs]
        members = [
            i
            for i, x in enumerate(G.elements)
            if all((x * s).images == (s * x).images for s in targets)
        ]
        members = np.asarray(members, dtype=np.int64)
    return _record(G, members, small_generating_set(G, members))


# ---------------------------------------------------------------------------
# quotients


class QuotientMap:
    """Surjection G -> Q with Q realized as a faithful permutation group.

    index_map sends G element indices to Q element indices.  Q's generator
    list is aligned with G's (identity images dropped by Group, but
    gen_image_indices keeps the full correspondence).
    """

    def __init__(self, G: Group, N: SubgroupRecord, Q: Group, index_map: np.ndarray):
        self.source = G
        self.kernel = N
        self.group = Q
        self.index_map = index_map
        self.gen_image_indices = tuple(int(index_map[g]) for g in G.gen_indices)

    def apply_index(self, i: int) -> int:
        return int(self.index_map[int(i)])

    def apply(self, p: Perm) -> Perm:
        return self.group.elements[self.apply_index(self.source.element_index(p))]

    def image_bits(self, bits: int) -> int:
        idxs = bits_to_indices(bits, self.source.order)
        return indices_to_bits(np.unique(self.index_map[idxs]), self.group.order)

    def preimage_bits(self, qbits: int) -> int:
        keep = np.array(
            [(qbits >> int(q)) & 1 for q in self.index_map], dtype=bool
        )
        return mask_to_bits(keep)


def _is_normal_bits(G: Group, members, bits) -> bool:
    return all(
        indices_to_bits(cm[members], G.order) == bits for cm in G.conj_maps()
    )


def _core_bits(G: Group, rec: SubgroupRecord, conj_maps) -> int:
    bits = rec.bits
    orbit = {rec.bits}
    frontier = [rec.member_indices()]
    while frontier:
        nxt = []
        for members in frontier:
            for cm in conj_maps:
                image = cm[members]
                b = indices_to_bits(image, G.order)
                if b not in orbit:
                    orbit.add(b)
                    bits &= b
                    nxt.append(np.sort(image))
        frontier = nxt
    return bits


def quotient_with_map(G: Group, N: SubgroupRecord) -> QuotientMap:
    """Quotient by a normal subgroup, as a faithful permutation group.

    The action is on the cosets of a core-free subgroup found greedily in
    the regular realization; the fallback is the regular action itself.
    """
    if not _is_normal_bits(G, N.member_indices(), N.bits):
        raise PreconditionError("quotient by a non-normal subgroup")
    n = G.order
    if N.order == 1:
        return QuotientMap(G, N, G, np.arange(n, dtype=np.int64))
    if N.order == n:
        Q = Group([], name=f"{G.name}/{G.name}", degree=1, caps=G.caps)
        return QuotientMap(G, N, Q, np.zeros(n, dtype=np.int64))
    t = G.table
    Nidx = N.member_indices()
    cos_id = np.full(n, -1, dtype=np.int64)
    reps = []
    for i in range(n):
        if cos_id[i] < 0:
            cos_id[t[Nidx, i]] = len(reps)
            reps.append(i)
    q = len(reps)
    rep_arr = np.asarray(reps, dtype=np.int64)

    def perm_on_cosets(elem_idx: int) -> Perm:
        return Perm(cos_id[t[rep_arr, elem_idx]])

    gen_imgs = [perm_on_cosets(g) for g in G.gen_indices]
    Qreg = Group(gen_imgs, name=f"{G.name}/N{N.order}", degree=q, caps=G.caps)
    assert Qreg.order == q, "regular realization has wrong order"

    Q, reg_to_small = _reduce_degree(Qreg)
    index_map = np.empty(n, dtype=np.int64)
    for i in range(n):
        ri = Qreg.element_index(perm_on_cosets(i))
        index_map[i] = reg_to_small[ri]
    return QuotientMap(G, N, Q, index_map)


def quotient(G: Group, N: SubgroupRecord) -> Group:
    return quotient_with_map(G, N).group


def _reduce_degree(Qreg: Group):
    """Re-realize a regular permutation group on cosets of a core-free
    subgroup when that shrinks the degree; returns (Q, index map)."""
    q = Qreg.order
    if q <= 16 or q > Qreg.caps.lattice:
        return Qreg, np.arange(q, dtype=np.int64)
    conj_maps = Qreg.conj_maps()
    t = Qreg.table

    def core_free(rec):
        return popcount(_core_bits(Qreg, rec, conj_maps)) == 1

    best = _record(Qreg, [0], ())
    for c in _cyclic_subgroups_prime_power(Qreg):
        if c.order > best.order and core_free(c):
            best = c
    improved = True
    while improved:
        improved = False
        inside = np.zeros(q, dtype=bool)
        inside[best.member_indices()] = True
        for x in range(1, q):
            if inside[x]:
                continue
            members = closure_indices(Qreg, best.gens + (x,), early_full=False)
            if len(members) == q:
                continue
            cand = _record(Qreg, members, best.gens + (x,))
            if cand.order > best.order and core_free(cand):
                best = cand
                improved = True
                break
    if best.order == 1:
        return Qreg, np.arange(q, dtype=np.int64)

    Kidx = best.member_indices()
    cos_id = np.full(q, -1, dtype=np.int64)
    reps = []
    for i in range(q):
        if cos_id[i] < 0:
            cos_id[t[Kidx, i]] = len(reps)
            reps.append(i)
    rep_arr = np.asarray(reps, dtype=np.int64)
    gen_imgs = [Perm(cos_id[t[rep_arr, g]]) for g in Qreg.gen_indices]
    Q = Group(gen_imgs, name=Qreg.name, degree=len(reps), caps=Qreg.caps)
    if Q.order != q:
        # the coset action turned out unfaithful; keep the regular action
        return Qreg, np.arange(q, dtype=np.int64)
    mapping = np.empty(q, dtype=np.int64)
    for i in range(q):
        mapping[i] = Q.element_index(Perm(cos_id[t[rep_arr, i]]))
    return Q, mapping
