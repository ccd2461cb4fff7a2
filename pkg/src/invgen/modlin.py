"""Group modules over prime fields, endomorphism fields, cohomology.

A ModuleAction pairs a permutation group H with one matrix over GF(p)
per generator, acting on row vectors from the right, so that the map
extends to a homomorphism H -> GL(dim, p) with M(ab) = M(a) M(b).  The
constructor builds the matrix of every element along the Cayley graph
and then checks every edge; consistency of all edges forces the
homomorphism property for arbitrary products (induction on word
length), so a bad assignment cannot slip through.

For irreducible V the commutant E = End_H(V) is a finite field
F = GF(p^e); derivations (maps d: H -> V with d(ab) = d(a) M(b) + d(b))
modulo the inner ones d_v(h) = v (M(h) - 1) give the first cohomology,
whose F-dimension is the quantity m that the lifting and crown
machinery consume.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, InputError, PreconditionError
from .gf import RowSpace, left_kernel, nullspace_right, rank, row_space_basis
from .group import Group, is_prime, load_group
from .perm import Perm

IRREDUCIBLE_ENUM_CAP = 4096  # vectors tried by the exhaustive spin test
FIELD_ENUM_CAP = 4096  # elements enumerated when verifying E is a field


@dataclass(frozen=True)
class EndField:
    """The endomorphism field F = GF(p^e) of an irreducible module.

    basis holds e commuting matrices spanning E over GF(p); the span
    contains the identity.  All checks that earn the name "field" are
    done in end_field(), not here.
    """

    p: int
    degree: int
    basis: np.ndarray  # (e, dim, dim)

    @property
    def size(self) -> int:
        return self.p**self.degree

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


class ModuleAction:
    """A finite group acting linearly on GF(p)^dim by row-vector matrices."""

    def __init__(self, group: Group, p: int, gen_matrices, name: str | None = None):
        if not is_prime(p):
            raise InputError(f"module characteristic {p} is not prime")
        self.group = group
        self.p = p
        self.name = name or f"module(p={p}, over {group.name})"
        mats = [np.asarray(m, dtype=np.int64) % p for m in gen_matrices]
        if len(mats) != len(group.generators):
            raise InputError(
                f"{len(mats)} matrices for {len(group.generators)} generators"
            )
        if not mats:
            # trivial group: the module is a bare vector space; dim unknown
            raise InputError("module needs at least one generator matrix")
        dim = mats[0].shape[0]
        for m in mats:
            if m.shape != (dim, dim):
                raise InputError(f"matrix shapes disagree: {m.shape} vs ({dim}, {dim})")
        if dim < 1:
            raise InputError("module dimension must be at least 1")
        self.dim = dim
        self.gen_matrices = mats
        self.matrices = self._build_and_verify()
        self._end: EndField | None = None
        self._der = None
        self._irr: bool | None = None

    def _build_and_verify(self) -> np.ndarray:
        G = self.group
        n = G.order
        p = self.p
        t = G.table
        mats = np.zeros((n, self.dim, self.dim), dtype=np.int64)
        mats[0] = np.eye(self.dim, dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for gi, M in zip(G.gen_indices, self.gen_matrices):
                    b = int(t[a, gi])
                    if not seen[b]:
                        seen[b] = True
                        mats[b] = (mats[a] @ M) % p
                        nxt.append(b)
            frontier = nxt
        # every Cayley edge must agree, which pins down all products
        for gi, M in zip(G.gen_indices, self.gen_matrices):
            lhs = mats[t[:, gi]]
            rhs = (mats @ M) % p
            if not np.array_equal(lhs, rhs):
                raise InputError(
                    "generator matrices do not satisfy the group's relations"
                )
        return mats

    def matrix(self, elem) -> np.ndarray:
        if isinstance(elem, Perm):
            elem = self.group.element_index(elem)
        return self.matrices[int(elem)]

    def is_faithful(self) -> bool:
        keys = {m.tobytes() for m in self.matrices}
        return len(keys) == self.group.order

    # -- submodule structure --------------------------------------------------

    def spin(self, v) -> RowSpace:
        """Smallest submodule containing v, as a row space."""
        space = RowSpace(self.p, self.dim)
        queue = []
        w = np.asarray(v, dtype=np.int64) % self.p
        if space.add(w):
            queue.append(w)
        while queue:
            w = queue.pop()
            for M in self.gen_matrices:
                u = (w @ M) % self.p
                if space.add(u):
                    queue.append(u)
        return space

    def is_irreducible(self) -> bool:
        """Exhaustive test: every nonzero vector must spin to the whole space."""
        if self._irr is None:
            total = self.p**self.dim
            if total > IRREDUCIBLE_ENUM_CAP:
                raise CapExceeded(
                    f"{total} vectors exceed the spin-test cap"
                    f" {IRREDUCIBLE_ENUM_CAP} (spin)"
                )
            irr = True
            for v in itertools.product(range(self.p), repeat=self.dim):
                if not any(v):
                    continue
                if self.spin(v).dim < self.dim:
                    irr = False
                    break
            self._irr = irr
        return self._irr

    # -- endomorphism field ---------------------------------------------------

    def commutant_basis(self) -> np.ndarray:
        """Matrices commuting with the action, as (e, dim, dim)."""
        p, d = self.p, self.dim
        eye = np.eye(d, dtype=np.int64)
        blocks = []
        for M in self.gen_matrices:
            # row-major vec: vec(A X B) = (A kron B^T) vec(X)
            blocks.append((np.kron(M, eye) - np.kron(eye, M.T)) % p)
        system = np.vstack(blocks)
        flat = nullspace_right(system, p)
        return flat.reshape(-1, d, d)

    def end_field(self) -> EndField:
        """Commutant verified to be a field by brute enumeration."""
        if self._end is not None:
            return self._end
        p, d = self.p, self.dim
        basis = self.commutant_basis()
        e = basis.shape[0]
        if p**e > FIELD_ENUM_CAP:
            raise CapExceeded(
                f"{p**e} commutant elements exceed the field check cap"
                f" {FIELD_ENUM_CAP} (field)"
            )
        span = RowSpace(p, d * d)
        for b in basis:
            span.add(b.reshape(-1))
        if not span.contains(np.eye(d, dtype=np.int64).reshape(-1)):
            raise PreconditionError("commutant does not contain the identity")
        for a, b in itertools.combinations_with_replacement(range(e), 2):
            ab = (basis[a] @ basis[b]) % p
            ba = (basis[b] @ basis[a]) % p
            if not np.array_equal(ab, ba):
                raise PreconditionError("commutant is not commutative")
            if not span.contains(ab.reshape(-1)):
                raise PreconditionError("commutant is not closed under products")
        for coeffs in itertools.product(range(p), repeat=e):
            if not any(coeffs):
                continue
            X = np.zeros((d, d), dtype=np.int64)
            for c, b in zip(coeffs, basis):
                X = (X + c * b) % p
            if rank(X, p) != d:
                raise PreconditionError(
                    "commutant has a singular nonzero element; not a field"
                    " (module is reducible?)"
                )
        self._end = EndField(p=p, degree=e, basis=basis)
        return self._end

    def is_absolutely_irreducible(self) -> bool:
        return self.is_irreducible() and self.end_field().degree == 1

    # -- fixed points and derivations -----------------------------------------

    def fixed_space(self, elems=None) -> np.ndarray:
        """Basis (rows) of the joint fixed space of the given elements.

        With elems=None the whole group is used (its generators pin the
        fixed space down).
        """
        eye = np.eye(self.dim, dtype=np.int64)
        if elems is None:
            mats = self.gen_matrices
        else:
            mats = [self.matrix(e) for e in elems]
        if not mats:
            return eye.copy()
        stacked = np.hstack([(M - eye) % self.p for M in mats])
        return left_kernel(stacked, self.p)

    def derivation_space(self) -> "DerivationSpace":
        if self._der is None:
            self._der = _compute_derivations(self)
        return self._der

    def h1_dim_gf(self) -> int:
        """dim over GF(p) of Der/Ider."""
        der = self.derivation_space()
        return der.dim_gf - der.dim_inner_gf

    def h1_dim(self) -> int:
        """m = dim over F = End_H(V) of the first cohomology."""
        e = self.end_field().degree
        gf = self.h1_dim_gf()
        if gf % e:
            raise PreconditionError(
                f"GF dimension {gf} of the cohomology is not divisible by e={e}"
            )
        return gf // e

    def __repr__(self):
        return f"ModuleAction({self.name}, dim={self.dim}, p={self.p})"


@dataclass
class DerivationSpace:
    """All derivations H -> V, coordinatised by their generator values.

    A derivation is pinned by x = (d(g_1), ..., d(g_k)) stitched into
    one row of length k*dim; expr[h] is the matrix with d(h) = x @
    expr[h].  x_basis rows span the legal x; inner_basis rows span the
    inner derivations' coordinates.
    """

    action: ModuleAction
    x_basis: np.ndarray  # (dim_der, k*dim)
    inner_basis: np.ndarray  # (dim_ider, k*dim)
    expr: np.ndarray  # (|H|, k*dim, dim)

    @property
    def dim_gf(self) -> int:
        return self.x_basis.shape[0]

    @property
    def dim_inner_gf(self) -> int:
        return self.inner_basis.shape[0]

    def evaluate(self, x, elem_idx: int) -> np.ndarray:
        """Value of the derivation with coordinates x at one element."""
        return (np.asarray(x, dtype=np.int64) @ self.expr[int(elem_idx)]) % self.action.p

    def values_at(self, x, elem_idxs) -> np.ndarray:
        """Concatenated values (d(h_1), ..., d(h_t)) as one row."""
        return np.concatenate([self.evaluate(x, i) for i in elem_idxs])

    def inner_coordinates(self, v) -> np.ndarray:
        """x-coordinates of the inner derivation d_v."""
        act = self.action
        eye = np.eye(act.dim, dtype=np.int64)
        return np.concatenate(
            [(np.asarray(v) @ ((M - eye) % act.p)) % act.p for M in act.gen_matrices]
        )


def _compute_derivations(act: ModuleAction) -> DerivationSpace:
    G = act.group
    p, d = act.p, act.dim
    k = len(act.gen_matrices)
    K = k * d
    n = G.order
    t = G.table
    expr = np.zeros((n, K, d), dtype=np.int64)
    unit = []
    for j in range(k):
        E = np.zeros((K, d), dtype=np.int64)
        E[j * d : (j + 1) * d] = np.eye(d, dtype=np.int64)
        unit.append(E)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for j, gi in enumerate(G.gen_indices):
                b = int(t[a, gi])
                if not seen[b]:
                    seen[b] = True
                    expr[b] = (expr[a] @ act.gen_matrices[j] + unit[j]) % p
                    nxt.append(b)
        frontier = nxt
    # every edge must be consistent; each defect column is a constraint on x
    constraints = RowSpace(p, K)
    for j, gi in enumerate(G.gen_indices):
        want = expr[t[:, gi]]
        got = (expr @ act.gen_matrices[j] + unit[j]) % p
        defect = (got - want) % p
        for col in defect.transpose(0, 2, 1).reshape(-1, K):
            if col.any():
                constraints.add(col)
                if constraints.dim == K:
                    break
        if constraints.dim == K:
            break
    if constraints.dim:
        x_basis = nullspace_right(constraints.basis_matrix(), p)
    else:
        x_basis = np.eye(K, dtype=np.int64)
    eye = np.eye(d, dtype=np.int64)
    inner_raw = np.hstack([(M - eye) % p for M in act.gen_matrices])
    inner_basis = row_space_basis(inner_raw, p)
    der = DerivationSpace(
        action=act, x_basis=x_basis, inner_basis=inner_basis, expr=expr
    )
    # inner derivations are derivations; catching drift here is cheap
    check = RowSpace(p, K, x_basis)
    for row in inner_basis:
        if not check.contains(row):
            raise PreconditionError("inner derivation escaped the derivation space")
    return der


def f_closed_add(space: RowSpace, v, end: EndField) -> bool:
    """Add the full F-line through v to an F-closed row space.

    Over the endomorphism field a vector is F-independent of an
    F-subspace exactly when it lies outside it as a GF(p) space, so
    keeping spaces F-closed lets greedy independence loops run on plain
    row spaces.  v may live in a direct sum of copies of the module;
    scalars act blockwise.  Returns True when the space grew.
    """
    vec = np.asarray(v, dtype=np.int64)
    dim = end.dim
    if vec.shape[-1] % dim:
        raise InputError(f"vector length {vec.shape[-1]} is not a multiple of {dim}")
    blocks = vec.reshape(-1, dim)
    grew = False
    for eb in end.basis:
        if space.add(((blocks @ eb) % end.p).reshape(-1)):
            grew = True
    return grew


def module_from_descriptor(desc: dict) -> ModuleAction:
    """Build a ModuleAction from a JSON-style descriptor.

    Expected keys: "p", "matrices" (one per listed generator), and
    "group" (any group descriptor).  When the group is given by
    explicit generators, identity generators are dropped together with
    their matrices, which must be identity matrices.
    """
    try:
        p = int(desc["p"])
        mats = [np.asarray(m, dtype=np.int64) for m in desc["matrices"]]
        gspec = dict(desc["group"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"module descriptor missing field: {exc}") from exc
    name = desc.get("name")
    if "generators" in gspec:
        perms = [Perm.from_one_based(images) for images in gspec["generators"]]
        if len(perms) != len(mats):
            raise InputError(
                f"{len(mats)} matrices for {len(perms)} listed generators"
            )
        keep_perms, keep_mats = [], []
        for perm, M in zip(perms, mats):
            if perm.is_identity():
                d = M.shape[0]
                if not np.array_equal(M % p, np.eye(d, dtype=np.int64)):
                    raise InputError("identity generator paired with a non-identity matrix")
                continue
            keep_perms.append(perm)
            keep_mats.append(M)
        gspec["generators"] = [perm.one_based() for perm in keep_perms]
        mats = keep_mats
    group = load_group(gspec)
    return ModuleAction(group, p, mats, name=name)
