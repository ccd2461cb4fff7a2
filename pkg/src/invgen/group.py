"""Finite permutation groups enumerated explicitly.

Elements are stored sorted lexicographically by image tuple, so element
indices, class representatives, and every downstream report are
deterministic.  Sizes are desk scale and guarded by caps:

    order  <= 100_000   full element enumeration
    degree <= 64        for groups loaded from descriptors
    order  <= 2_000     multiplication table / subgroup lattice work

Internally constructed groups (quotients, semidirect products acting on
module points) may exceed the degree cap; they still respect the order
caps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, InputError
from .perm import Perm
from .rng import Stream

# ---------------------------------------------------------------------------
# caps


@dataclass(frozen=True)
class Caps:
    order: int = 100_000
    degree: int = 64
    lattice: int = 2_000


DEFAULT_CAPS = Caps()


def _caps(caps) -> Caps:
    return caps if caps is not None else DEFAULT_CAPS


# ---------------------------------------------------------------------------
# small number theory for the families


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int):
    """Return (p, k) with q = p**k, or None."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if not is_prime(p):
            continue
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


class SmallField:
    """GF(p^k) for k <= 3, as index arithmetic tables.

    Elements are polynomials over GF(p) modulo the lexicographically first
    monic irreducible of degree k; element index is sum(c_i * p^i).
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise InputError(f"field characteristic {p} is not prime")
        if not 1 <= k <= 3:
            raise InputError(f"field degree {k} outside the tabulated range 1..3")
        self.p, self.k, self.q = p, k, p**k
        self.modulus = self._find_irreducible(p, k)

    @staticmethod
    def _find_irreducible(p, k):
        if k == 1:
            return (0, 1)
        # degree 2 or 3: irreducible iff no root in GF(p)
        for idx in range(p**k):
            coeffs = []
            m = idx
            for _ in range(k):
                coeffs.append(m % p)
                m //= p
            poly = tuple(coeffs) + (1,)
            if all(
                sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p for x in range(p)
            ):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def coeffs(self, idx):
        out = []
        for _ in range(self.k):
            out.append(idx % self.p)
            idx //= self.p
        return out

    def index(self, coeffs):
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + (c % self.p)
        return v

    def add(self, a, b):
        ca, cb = self.coeffs(a), self.coeffs(b)
        return self.index([x + y for x, y in zip(ca, cb)])

    def mul(self, a, b):
        ca, cb = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(ca):
            for j, y in enumerate(cb):
                prod[i + j] += x * y
        # reduce modulo the monic modulus
        for i in range(len(prod) - 1, self.k - 1, -1):
            c = prod[i] % self.p
            if c:
                for j in range(self.k):
                    prod[i - self.k + j] -= c * self.modulus[j]
            prod[i] = 0
        return self.index(prod[: self.k])

    def mult_order(self, a):
        n, x = 1, a
        while x != 1:
            x = self.mul(x, a)
            n += 1
            if n > self.q:
                raise AssertionError("nonunit passed to mult_order")
        return n

    def primitive_element(self):
        for a in range(2, self.q):
            if self.mult_order(a) == self.q - 1:
                return a
        raise AssertionError("no primitive element")


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass
class ConjClass:
    rep: int  # element index of the minimal member
    size: int
    members: int  # bitset over element indices

    def member_indices(self):
        return bit_indices(self.members)


def bit_indices(bits: int):
    """Indices of set bits, ascending."""
    out = []
    while bits:
        lsb = bits & -bits
        out.append(lsb.bit_length() - 1)
        bits ^= lsb
    return out


# ---------------------------------------------------------------------------


class Group:
    """A finite permutation group with a full, sorted element list."""

    def __init__(self, generators, name="G", degree=None, caps=None, _enforce_degree=False):
        caps = _caps(caps)
        gens = [g for g in generators if not g.is_identity()]
        if degree is None:
            if not gens:
                raise InputError("generator-free group needs an explicit degree")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise InputError("generators act on different point sets")
        if _enforce_degree and degree > caps.degree:
            raise CapExceeded(f"degree {degree} exceeds degree cap {caps.degree}")
        self.name = name
        self.degree = degree
        self.generators = tuple(gens)
        self.caps = caps
        self.elements = self._enumerate(caps.order)
        self.order = len(self.elements)
        self.index = {p.images: i for i, p in enumerate(self.elements)}
        self.gen_indices = tuple(self.index[g.images] for g in self.generators)
        # lazy caches
        self._table = None
        self._inv = None
        self._classes = None
        self._class_of = None
        self._lattice = None
        self._coverage = None
        self._normals = None

    # -- enumeration --------------------------------------------------------

    def _enumerate(self, order_cap):
        ident = Perm.identity(self.degree)
        seen = {ident.images: ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for a in frontier:
                for g in self.generators:
                    b = a * g
                    if b.images not in seen:
                        if len(seen) >= order_cap:
                            raise CapExceeded(
                                f"group order exceeds enumeration cap {order_cap}"
                            )
                        seen[b.images] = b
                        nxt.append(b)
            frontier = nxt
        return tuple(sorted(seen.values()))

    # -- basics --------------------------------------------------------------

    def element_index(self, p: Perm) -> int:
        try:
            return self.index[p.images]
        except KeyError:
            raise InputError(f"{p.cycle_string()} is not an element of {self.name}")

    def __contains__(self, p):
        return isinstance(p, Perm) and p.images in self.index

    def identity_index(self) -> int:
        return 0  # the identity is lexicographically first

    def mult_index(self, i: int, j: int) -> int:
        if self._table is not None:
            return int(self._table[i, j])
        return self.index[(self.elements[i] * self.elements[j]).images]

    def inv_index(self, i: int) -> int:
        if self._inv is None:
            inv = np.empty(self.order, dtype=np.int64)
            for k, p in enumerate(self.elements):
                inv[k] = self.index[p.inverse().images]
            self._inv = inv
        return int(self._inv[i])

    def random_element_index(self, stream: Stream) -> int:
        return stream.randbelow(self.order)

    # -- multiplication table -----------------------------------------------

    @property
    def table(self) -> np.ndarray:
        """Full index multiplication table; only at lattice scale.

        Built by BFS: if e_i = e_a * g for a generator g, then row i is
        row a permuted by the left-multiplication map of g, so each row
        costs one vectorized gather.
        """
        if self._table is None:
            if self.order > self.caps.lattice:
                raise CapExceeded(
                    f"order {self.order} exceeds table cap {self.caps.lattice} (lattice)"
                )
            n = self.order
            left = {}
            for gi in self.gen_indices:
                g = self.elements[gi]
                left[gi] = np.array(
                    [self.index[(g * e).images] for e in self.elements], dtype=np.int32
                )
            table = np.empty((n, n), dtype=np.int32)
            table[0] = np.arange(n, dtype=np.int32)
            visited = np.zeros(n, dtype=bool)
            visited[0] = True
            frontier = [0]
            while frontier:
                nxt = []
                for a in frontier:
                    for gi in self.gen_indices:
                        c = int(table[a, gi])
                        if not visited[c]:
                            visited[c] = True
                            table[c] = table[a][left[gi]]
                            nxt.append(c)
                frontier = nxt
            self._table = table
        return self._table

    def conj_maps(self):
        """Index maps i -> index(g^-1 * e_i * g) for each generator g."""
        t = self.table
        maps = []
        for gi in self.gen_indices:
            ginv = self.inv_index(gi)
            maps.append(t[t[ginv, :], gi])
        return maps

    # -- conjugacy classes ----------------------------------------------------

    def conjugacy_classes(self):
        """Classes sorted by (size, representative index); identity first."""
        if self._classes is None:
            n = self.order
            gen_perms = [(g, g.inverse()) for g in self.elements_at(self.gen_indices)]
            assigned = [-1] * n
            classes = []
            for start in range(n):
                if assigned[start] != -1:
                    continue
                orbit = [start]
                assigned[start] = -2
                k = 0
                while k < len(orbit):
                    x = self.elements[orbit[k]]
                    k += 1
                    for g, ginv in gen_perms:
                        y = ginv * x * g
                        yi = self.index[y.images]
                        if assigned[yi] == -1:
                            assigned[yi] = -2
                            orbit.append(yi)
                bits = 0
                for i in orbit:
                    bits |= 1 << i
                classes.append(ConjClass(rep=min(orbit), size=len(orbit), members=bits))
            classes.sort(key=lambda c: (c.size, c.rep))
            class_of = np.empty(n, dtype=np.int32)
            for ci, c in enumerate(classes):
                for i in c.member_indices():
                    class_of[i] = ci
            self._classes = classes
            self._class_of = class_of
        return self._classes

    def class_of(self) -> np.ndarray:
        self.conjugacy_classes()
        return self._class_of

    def elements_at(self, indices):
        return [self.elements[i] for i in indices]

    def element_orders(self):
        return [p.order() for p in self.elements]

    # -- serialization ---------------------------------------------------------

    def descriptor(self) -> dict:
        return {
            "name": self.name,
            "degree": self.degree,
            "generators": [g.one_based() for g in self.generators],
        }

    def canonical_key(self) -> str:
        """Bit-exact serialization: degree plus sorted 1-based image lists."""
        gens = sorted(g.one_based() for g in self.generators)
        return json.dumps({"degree": self.degree, "generators": gens}, separators=(",", ":"))

    def __repr__(self):
        return f"Group({self.name}, order={self.order}, degree={self.degree})"


# ---------------------------------------------------------------------------
# descriptor loading and named families


def _family_generators(family, desc):
    """0-based cycle data for each built-in family."""
    if family == "sym":
        n = int(desc["n"])
        if n < 1:
            raise InputError("sym needs n >= 1")
        if n == 1:
            return [], 1
        if n == 2:
            return [[(0, 1)]], 2
        return [[(0, 1)], [tuple(range(n))]], n
    if family == "alt":
        n = int(desc["n"])
        if n < 1:
            raise InputError("alt needs n >= 1")
        if n <= 2:
            return [], n
        if n == 3:
            return [[(0, 1, 2)]], 3
        if n % 2 == 1:
            return [[(0, 1, 2)], [tuple(range(n))]], n
        return [[(0, 1, 2)], [tuple(range(1, n))]], n
    if family == "cyclic":
        n = int(desc["n"])
        if n < 1:
            raise InputError("cyclic needs n >= 1")
        if n == 1:
            return [], 1
        return [[tuple(range(n))]], n
    if family == "dihedral":
        n = int(desc["n"])
        if n < 1:
            raise InputError("dihedral needs n >= 1")
        if n == 1:
            return [[(0, 1)]], 2
        if n == 2:
            return [[(0, 1)], [(2, 3)]], 4
        rot = [tuple(range(n))]
        refl = [tuple((i, n - i)) for i in range(1, (n + 1) // 2) if i != n - i]
        return [rot, refl], n
    raise InputError(f"unknown family {family!r}")


def _elemab_group(p, k, caps):
    if not is_prime(p):
        raise InputError(f"elemab characteristic {p} is not prime")
    if k < 1:
        raise InputError("elemab needs k >= 1")
    degree = p * k
    gens = [
        Perm.from_cycles([tuple(range(i * p, (i + 1) * p))], degree) for i in range(k)
    ]
    return Group(gens, name=f"elemab({p},{k})", degree=degree, caps=caps, _enforce_degree=True)


def _agl1_group(q, caps):
    pk = prime_power(q)
    if pk is None:
        raise InputError(f"agl1 needs a prime power, got {q}")
    p, k = pk
    F = SmallField(p, k)
    trans = Perm([F.add(x, 1) for x in range(q)])
    gens = [trans]
    if q > 2:
        g = F.primitive_element()
        gens.append(Perm([F.mul(x, g) for x in range(q)]))
    return Group(gens, name=f"agl1({q})", degree=q, caps=caps, _enforce_degree=True)


def load_group(desc: dict, caps=None) -> Group:
    """Build a Group from a JSON-style descriptor.

    Either explicit generators:
        {"name": str, "degree": int, "generators": [[int 1-based image list], ...]}
    or a named family:
        {"family": "sym"|"alt"|"cyclic"|"dihedral", "n": int}
        {"family": "elemab", "p": int, "k": int}
        {"family": "agl1", "q": int}
    """
    caps = _caps(caps)
    if not isinstance(desc, dict):
        raise InputError("group descriptor must be a JSON object")
    if "family" in desc:
        fam = desc["family"]
        try:
            if fam == "elemab":
                grp = _elemab_group(int(desc["p"]), int(desc["k"]), caps)
            elif fam == "agl1":
                grp = _agl1_group(int(desc["q"]), caps)
            else:
                cyc, degree = _family_generators(fam, desc)
                gens = [Perm.from_cycles(c, degree) for c in cyc]
                param = desc.get("n", desc.get("q"))
                grp = Group(
                    gens,
                    name=desc.get("name", f"{fam}({param})"),
                    degree=degree,
                    caps=caps,
                    _enforce_degree=True,
                )
        except KeyError as e:
            raise InputError(f"family {fam!r} is missing parameter {e}")
        if "name" in desc:
            grp.name = desc["name"]
        return grp
    if "generators" in desc:
        try:
            degree = int(desc["degree"])
        except KeyError:
            raise InputError("explicit descriptor needs a degree")
        if degree < 1:
            raise InputError("degree must be positive")
        gens = [Perm.from_one_based(imgs, degree) for imgs in desc["generators"]]
        return Group(
            gens,
            name=desc.get("name", "G"),
            degree=degree,
            caps=caps,
            _enforce_degree=True,
        )
    raise InputError("group descriptor needs 'family' or 'generators'")
