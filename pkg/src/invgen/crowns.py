"""Chief series, crowns, crown-based powers, and their verification hooks.

A chief series is refined from the normal-subgroup lattice by walking
down through largest proper normal subgroups (deterministic
tie-breaking, with an optional reversed order used by tests to confirm
series-independence of the derived counts).  Each abelian factor
carries its conjugation module; each factor carries the centralizer of
its section, which is what equivalence of factors is measured against:
abelian factors are equivalent when their modules are isomorphic,
nonabelian factors when their section centralizers coincide.

For a non-Frattini factor A the crown is computed from the normal
subgroups N whose quotient is monolithic with socle equivalent to A
and isomorphic to the monolithic primitive group L_A attached to A;
R_G(A) is the intersection of all such N, I_G(A) the preimage of the
socle of G/R_G(A), and delta the logarithm of that socle's size in
base |A|.  A Frattini-trivial group always has a crown whose R is
complemented in I by a normal subgroup; corona_decomposition finds one
and treats absence as an internal defect, not a soft failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, InputError, InvgenError, PreconditionError
from .group import Group, is_prime, load_group
from .iso import find_isomorphism
from .modlin import ModuleAction, module_from_descriptor
from .perm import Perm
from .subgroups import (
    SubgroupRecord,
    _record,
    bits_to_indices,
    closure_indices,
    frattini,
    indices_to_bits,
    minimal_normal_subgroups,
    normal_subgroups,
    quotient_with_map,
    small_generating_set,
)

CROWN_POWER_POINT_CAP = 4096


# ---------------------------------------------------------------------------
# chief factors


@dataclass
class ChiefFactor:
    """One section upper/lower of a chief series of G."""

    group: Group
    upper: SubgroupRecord
    lower: SubgroupRecord
    order: int  # |upper| / |lower|
    is_abelian: bool
    is_frattini: bool
    centralizer: SubgroupRecord
    module: ModuleAction | None  # conjugation action, abelian factors only
    p: int | None
    f: int | None

    def __repr__(self):
        kind = "abelian" if self.is_abelian else "nonabelian"
        fr = ", frattini" if self.is_frattini else ""
        return f"ChiefFactor(order={self.order}, {kind}{fr})"


def _inverse_index_array(G: Group) -> np.ndarray:
    return np.array([G.inv_index(i) for i in range(G.order)], dtype=np.int64)


def section_centralizer(G: Group, upper: SubgroupRecord, lower: SubgroupRecord) -> SubgroupRecord:
    """Elements g with [g, upper] inside lower.

    Checking generators of the section suffices: commutators against a
    product fold into conjugates of commutators, and lower is normal.
    """
    t = G.table
    n = G.order
    invs = _inverse_index_array(G)
    in_lower = np.zeros(n, dtype=bool)
    in_lower[lower.member_indices()] = True
    ok = np.ones(n, dtype=bool)
    allg = np.arange(n)
    for s in upper.gens:
        sinv = G.inv_index(int(s))
        # [g, s] = g^-1 s^-1 g s, per g
        x = t[t[t[invs, sinv], allg], int(s)]
        ok &= in_lower[x]
    members = np.nonzero(ok)[0]
    return _record(G, members, small_generating_set(G, members))


def _coords_of_section(G: Group, upper: SubgroupRecord, lower: SubgroupRecord, p: int):
    """GF(p) coordinates on upper/lower: basis element indices + full map."""
    t = G.table
    lower_members = [int(i) for i in lower.member_indices()]
    coords: dict[int, np.ndarray] = {}
    basis: list[int] = []
    for i in lower_members:
        coords[i] = np.zeros(0, dtype=np.int64)
    for x in (int(i) for i in upper.member_indices()):
        if x in coords:
            continue
        bi = len(basis)
        basis.append(x)
        for known in list(coords):
            coords[known] = np.append(coords[known], 0)
        current = list(coords.items())
        xc = 0
        for c in range(1, p):
            xc = int(t[xc, x])
            for y, vec in current:
                w = vec.copy()
                w[bi] = c
                coords[int(t[y, xc])] = w
    f = len(basis)
    if lower.order * p**f != upper.order:
        raise PreconditionError("section is not elementary abelian of the expected rank")
    return basis, coords, f


def _section_module(G: Group, upper: SubgroupRecord, lower: SubgroupRecord):
    """(p, f, ModuleAction) for an abelian chief factor."""
    size = upper.order // lower.order
    p = min(q for q in range(2, size + 1) if size % q == 0)
    if not is_prime(p):
        raise PreconditionError("section size has no prime part; not abelian")
    f = 0
    size_left = size
    while size_left % p == 0:
        size_left //= p
        f += 1
    if size_left != 1:
        raise PreconditionError(f"abelian chief factor size {size} is not a prime power")
    basis, coords, rank = _coords_of_section(G, upper, lower, p)
    if rank != f:
        raise PreconditionError("section rank disagrees with its order")
    t = G.table
    mats = []
    for gi in G.gen_indices:
        ginv = G.inv_index(gi)
        M = np.zeros((f, f), dtype=np.int64)
        for bi, b in enumerate(basis):
            conj = int(t[int(t[ginv, b]), gi])
            M[bi] = coords[conj]
        mats.append(M)
    module = ModuleAction(G, p, mats, name=f"section({upper.order}/{lower.order} of {G.name})")
    return p, f, module


def _section_is_abelian(G: Group, upper: SubgroupRecord, lower: SubgroupRecord) -> bool:
    t = G.table
    in_lower = np.zeros(G.order, dtype=bool)
    in_lower[lower.member_indices()] = True
    gens = [int(s) for s in upper.gens]
    for i, a in enumerate(gens):
        ainv = G.inv_index(a)
        for b in gens[i + 1 :]:
            binv = G.inv_index(b)
            comm = int(t[int(t[int(t[ainv, binv]), a]), b])
            if not in_lower[comm]:
                return False
    return True


def _make_factor(G: Group, upper: SubgroupRecord, lower: SubgroupRecord) -> ChiefFactor:
    order = upper.order // lower.order
    abelian = _section_is_abelian(G, upper, lower)
    cent = section_centralizer(G, upper, lower)
    module = p = f = None
    if abelian:
        p, f, module = _section_module(G, upper, lower)
    frattini_flag = False
    if abelian:
        qm = quotient_with_map(G, lower)
        phi = frattini(qm.group)
        image = qm.image_bits(upper.bits)
        frattini_flag = (image & phi.bits) == image
    return ChiefFactor(
        group=G, upper=upper, lower=lower, order=order, is_abelian=abelian,
        is_frattini=frattini_flag, centralizer=cent, module=module, p=p, f=f,
    )


def chief_series(G: Group, reverse_ties: bool = False) -> list[ChiefFactor]:
    """Chief factors from bottom to top.

    Deterministic: each step descends to the largest proper normal
    subgroup of G inside the current term, ties broken by bitset value
    (reverse_ties flips the tie order; the counts derived downstream
    must not care, and tests check that).
    """
    normals = normal_subgroups(G)
    chain = []
    cur = normals[-1]  # G itself
    chain.append(cur)
    while cur.order > 1:
        inside = [
            N for N in normals
            if N.order < cur.order and (N.bits & cur.bits) == N.bits
        ]
        key = (lambda r: (r.order, -r.bits)) if reverse_ties else (lambda r: (r.order, r.bits))
        cur = max(inside, key=key)
        chain.append(cur)
    factors = []
    for lower, upper in zip(chain[::-1][:-1], chain[::-1][1:]):
        factors.append(_make_factor(G, upper, lower))
    return factors


# ---------------------------------------------------------------------------
# equivalence of factors


def modules_isomorphic(ma: ModuleAction, mb: ModuleAction) -> bool:
    """Existence of a module isomorphism between actions of one group.

    Both must be modules for the same group over the same prime with
    equal dimensions.  Irreducibility makes any nonzero intertwiner
    invertible, so a nonzero solution of M_a T = T M_b settles it.
    """
    if ma.group is not mb.group and ma.group.canonical_key() != mb.group.canonical_key():
        raise InputError("module isomorphism needs actions of the same group")
    if ma.p != mb.p or ma.dim != mb.dim:
        return False
    from .gf import nullspace_right, rank

    p, d = ma.p, ma.dim
    eye = np.eye(d, dtype=np.int64)
    blocks = []
    for A, B in zip(ma.gen_matrices, mb.gen_matrices):
        blocks.append((np.kron(A, eye) - np.kron(eye, B.T)) % p)
    sols = nullspace_right(np.vstack(blocks), p)
    for row in sols:
        T = row.reshape(d, d)
        if rank(T, p) == d:
            return True
    # nonzero but singular solutions should not happen for chief factors
    return False


def factors_equivalent(G: Group, A: ChiefFactor, B: ChiefFactor) -> bool:
    """G-equivalence of chief factors.

    Abelian factors: isomorphism of the conjugation modules.
    Nonabelian factors: equality of section centralizers.
    """
    if A.is_abelian != B.is_abelian or A.order != B.order:
        return False
    if A.is_abelian:
        return modules_isomorphic(A.module, B.module)
    return A.centralizer.bits == B.centralizer.bits


# ---------------------------------------------------------------------------
# crowns


@dataclass
class CrownData:
    factor: ChiefFactor
    delta: int
    R: SubgroupRecord
    I: SubgroupRecord
    U: SubgroupRecord | None = None


def socle_record(G: Group) -> SubgroupRecord:
    """Product of all minimal normal subgroups."""
    mins = minimal_normal_subgroups(G)
    if not mins:
        return _record(G, [0], ())
    gens = []
    for rec in mins:
        gens.extend(rec.gens)
    members = closure_indices(G, gens)
    return _record(G, members, small_generating_set(G, members))


def _record_from_bits(G: Group, bits: int) -> SubgroupRecord:
    members = bits_to_indices(bits, G.order)
    return _record(G, members, small_generating_set(G, members))


def _quotient_module_action(G: Group, qm, module: ModuleAction) -> ModuleAction:
    """Push a G-module whose kernel contains ker(qm) down to the quotient."""
    Q = qm.group
    mats = []
    for i, gi in enumerate(G.gen_indices):
        if qm.apply_index(int(gi)) != 0:
            mats.append(module.gen_matrices[i])
    if len(mats) != len(Q.generators):
        raise PreconditionError("generator alignment with the quotient failed")
    return ModuleAction(Q, module.p, mats, name=f"{module.name} via {Q.name}")


def monolithic_group_for(G: Group, A: ChiefFactor) -> Group:
    """L_A: V x| (G/C_G(A)) for abelian A, G/C_G(A) otherwise."""
    C = A.centralizer
    if not A.is_abelian:
        return quotient_with_map(G, C).group
    if C.order == G.order:
        # trivial action: the primitive group is the module itself
        return load_group({"family": "elemab", "p": A.p, "k": A.f})
    qm = quotient_with_map(G, C)
    act_q = _quotient_module_action(G, qm, A.module)
    return build_crown_power_abelian(act_q, 1)


def _factor_of_quotient_socle(G: Group, N: SubgroupRecord, qm) -> ChiefFactor | None:
    """The section of G covering the unique minimal normal of G/N, if unique."""
    mins = minimal_normal_subgroups(qm.group)
    if len(mins) != 1:
        return None
    soc_bits = qm.preimage_bits(mins[0].bits)
    upper = _record_from_bits(G, soc_bits)
    return _make_factor(G, upper, N)


def _crown_candidates(G: Group, A: ChiefFactor, L_A: Group) -> list[SubgroupRecord]:
    target_index = L_A.order
    out = []
    for N in normal_subgroups(G):
        if G.order != N.order * target_index:
            continue
        qm = quotient_with_map(G, N)
        B = _factor_of_quotient_socle(G, N, qm)
        if B is None or B.order != A.order:
            continue
        if not factors_equivalent(G, A, B):
            continue
        if find_isomorphism(qm.group, L_A) is None:
            continue
        out.append(N)
    return out


def _crown_from_candidates(G: Group, A: ChiefFactor, cands: list[SubgroupRecord]) -> CrownData:
    if not cands:
        raise InvgenError(
            "no monolithic quotient matches the factor; crown undefined"
        )
    bits = cands[0].bits
    for N in cands[1:]:
        bits &= N.bits
    R = _record_from_bits(G, bits)
    qm = quotient_with_map(G, R)
    soc = socle_record(qm.group)
    I = _record_from_bits(G, qm.preimage_bits(soc.bits))
    delta = round(math.log(soc.order) / math.log(A.order))
    if A.order**delta != soc.order:
        raise InvgenError(
            f"socle size {soc.order} is not a power of the factor size {A.order}"
        )
    return CrownData(factor=A, delta=delta, R=R, I=I)


def abelian_crown(G: Group, A: ChiefFactor) -> CrownData:
    """R_G(A), I_G(A) and delta for a non-Frattini abelian chief factor."""
    if not A.is_abelian:
        raise PreconditionError("factor is nonabelian; use the corona path")
    if A.is_frattini:
        raise PreconditionError("Frattini factors have no crown")
    L_A = monolithic_group_for(G, A)
    crown = _crown_from_candidates(G, A, _crown_candidates(G, A, L_A))
    _assert_series_count(G, A, crown.delta)
    return crown


def _crown_nonabelian(G: Group, A: ChiefFactor) -> CrownData:
    L_A = monolithic_group_for(G, A)
    crown = _crown_from_candidates(G, A, _crown_candidates(G, A, L_A))
    _assert_series_count(G, A, crown.delta)
    return crown


def _assert_series_count(G: Group, A: ChiefFactor, delta: int) -> None:
    for reverse in (False, True):
        series = chief_series(G, reverse_ties=reverse)
        count = sum(
            1
            for B in series
            if not B.is_frattini and factors_equivalent(G, A, B)
        )
        if count != delta:
            raise InvgenError(
                f"delta {delta} disagrees with the series count {count}"
                f" (reverse_ties={reverse})"
            )


def crown_of_factor(G: Group, A: ChiefFactor) -> CrownData:
    if A.is_abelian:
        return abelian_crown(G, A)
    return _crown_nonabelian(G, A)


def corona_decomposition(G: Group) -> CrownData:
    """A crown with a normal complement U: I = R x U.

    Requires a trivial Frattini subgroup; by the underlying lemma a
    complemented crown always exists then, so exhausting all crowns
    without finding one raises (bug indicator, never a soft error).
    """
    if G.order == 1:
        raise PreconditionError("the trivial group has no chief factors")
    if frattini(G).order != 1:
        raise PreconditionError("Frattini subgroup is nontrivial")
    series = chief_series(G)
    seen: list[ChiefFactor] = []
    normals = normal_subgroups(G)
    for A in series:
        if A.is_frattini:
            continue
        if any(factors_equivalent(G, A, B) for B in seen):
            continue
        seen.append(A)
        crown = crown_of_factor(G, A)
        want_order = crown.I.order // crown.R.order
        for U in normals:
            if U.order != want_order or U.order == 1:
                continue
            if (U.bits & crown.I.bits) != U.bits:
                continue
            if (U.bits & crown.R.bits) != 1:
                continue
            crown.U = U
            return crown
    raise InvgenError(
        "no crown of a Frattini-trivial group admitted a normal complement"
    )


def verify_sotto(G: Group, crown: CrownData, K: SubgroupRecord) -> bool:
    """Literal check of: KU = KR = G implies K = G."""
    if crown.U is None:
        raise PreconditionError("crown carries no complement U")
    t = G.table
    k_idx = K.member_indices()

    def product_is_group(other: SubgroupRecord) -> bool:
        prods = t[np.ix_(k_idx, other.member_indices())]
        return len(np.unique(prods)) == G.order

    if product_is_group(crown.U) and product_is_group(crown.R):
        return K.order == G.order
    return True


# ---------------------------------------------------------------------------
# crown-based power constructors


def abelian_crown_power_with_embedding(act: ModuleAction, u: int):
    """V^u x| H as a permutation group on the points of V^u, plus an embed map.

    embed(v, h) is the permutation x -> x @ diag-block(M_h) + v; the
    group multiplication realized is (v1, h1)(v2, h2) =
    (v1 M_{h2} + v2, h1 h2), matching left-to-right composition.
    """
    if u < 0:
        raise InputError(f"u must be nonnegative, got {u}")
    H = act.group
    if u == 0:
        def embed0(v, h):
            if np.asarray(v).size:
                raise InputError("u = 0 admits no vector part")
            return H.elements[_as_index(H, h)]
        return H, embed0
    p, dim = act.p, act.dim
    K = dim * u
    npoints = p**K
    if npoints > CROWN_POWER_POINT_CAP:
        raise CapExceeded(
            f"{npoints} points exceed the crown power cap {CROWN_POWER_POINT_CAP} (points)"
        )
    if npoints * H.order > H.caps.order:
        raise CapExceeded(
            f"order {npoints * H.order} exceeds cap {H.caps.order} (order)"
        )
    powers = p ** np.arange(K, dtype=np.int64)
    allpts = (np.arange(npoints, dtype=np.int64)[:, None] // powers) % p

    def encode(vecs: np.ndarray) -> np.ndarray:
        return (vecs % p) @ powers

    def h_block(hi: int) -> np.ndarray:
        M = act.matrices[hi]
        B = np.zeros((K, K), dtype=np.int64)
        for c in range(u):
            B[c * dim : (c + 1) * dim, c * dim : (c + 1) * dim] = M
        return B

    def embed(v, h) -> Perm:
        hi = _as_index(H, h)
        vec = np.asarray(v, dtype=np.int64).reshape(K) % p
        imgs = encode(allpts @ h_block(hi) + vec)
        return Perm(int(i) for i in imgs)

    gens = []
    zero = np.zeros(K, dtype=np.int64)
    for gi in H.gen_indices:
        gens.append(embed(zero, int(gi)))
    for tcoord in range(K):
        e_t = np.zeros(K, dtype=np.int64)
        e_t[tcoord] = 1
        gens.append(embed(e_t, 0))
    name = f"crownpower({act.name}, u={u})"
    G = Group(gens, name=name, degree=npoints, caps=H.caps)
    if G.order != npoints * H.order:
        raise PreconditionError(
            f"crown power closed to order {G.order}, wanted {npoints * H.order}"
        )
    return G, embed


def _as_index(H: Group, h) -> int:
    if isinstance(h, Perm):
        return H.element_index(h)
    return int(h)


def build_crown_power_abelian(act: ModuleAction, u: int) -> Group:
    return abelian_crown_power_with_embedding(act, u)[0]


def build_crown_power_general(L: Group, A: SubgroupRecord, k: int) -> Group:
    """Tuples in L^k congruent modulo A, on k disjoint copies of L's domain."""
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    mins = minimal_normal_subgroups(L)
    if len(mins) != 1 or mins[0].bits != A.bits:
        raise InputError("A is not the unique minimal normal subgroup of L")
    if _section_is_abelian(L, A, _record(L, [0], ())):
        if (frattini(L).bits & A.bits) != 1:
            raise InputError("socle is Frattini; L is not monolithic primitive")
    if k == 1:
        return L
    target = A.order ** (k - 1) * L.order
    if target > L.caps.order:
        raise CapExceeded(f"order {target} exceeds cap {L.caps.order} (order)")
    deg = L.degree * k
    gens = []
    for g in L.generators:
        imgs = []
        for c in range(k):
            imgs.extend(c * L.degree + i for i in g.images)
        gens.append(Perm(imgs))
    for c in range(k):
        for ai in A.gens:
            a = L.elements[int(ai)]
            imgs = list(range(deg))
            for i, img in enumerate(a.images):
                imgs[c * L.degree + i] = c * L.degree + img
            gens.append(Perm(imgs))
    G = Group(gens, name=f"crownpower_general({L.name}, k={k})", degree=deg, caps=L.caps)
    if G.order != target:
        raise PreconditionError(
            f"congruence power closed to order {G.order}, wanted {target}"
        )
    return G


def crown_power_from_descriptor(desc: dict) -> Group:
    """Build from {"crownpower": {...}} / {"crownpower_general": {...}}."""
    if "crownpower" in desc:
        inner = desc["crownpower"]
        act = module_from_descriptor(inner["module"])
        return build_crown_power_abelian(act, int(inner["u"]))
    if "crownpower_general" in desc:
        inner = desc["crownpower_general"]
        L = load_group(inner["group"])
        socle = inner.get("socle", "auto")
        if socle != "auto":
            raise InputError("only socle='auto' is supported")
        mins = minimal_normal_subgroups(L)
        if len(mins) != 1:
            raise InputError("group has no unique minimal normal subgroup")
        return build_crown_power_general(L, mins[0], int(inner["k"]))
    raise InputError("descriptor has no crownpower key")
