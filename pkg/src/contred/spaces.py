"""Finite topological spaces and the maps between them.

A finite space is stored as its specialization preorder: ``x below y``
means x lies in the closure of {y}.  Open sets are exactly the up-sets of
that preorder, closed sets the down-sets, and a map between finite spaces
is continuous iff it is monotone with respect to ``below``.  All
operations (closure, subspace, product, coproduct, composition, ...) are
phrased in terms of point index bitmasks, which keeps the exhaustive
searches elsewhere in the package cheap.

Partiality stands in for subspaces: a partial map is a map whose domain
of definition carries the subspace structure, so restriction never has to
build a new space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product as _iproduct
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import CapacityError, SpaceMismatchError

_OPENS_LIMIT = 20  # 2**n subsets get enumerated; refuse anything larger

CHOICE_CAP = 10_000  # default ceiling on enumerated choice functions


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class Space:
    """A finite topological space as a preorder on named points.

    ``up[i]`` is the bitmask of point indices j with point i below point j
    (i.e. i in cl{j}).  The relation must be reflexive and transitive;
    this is asserted on construction, so every Space in circulation is a
    genuine preorder.
    """

    name: str
    points: tuple[str, ...]
    up: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(set(self.points)) != len(self.points):
            raise ValueError(f"duplicate point in space {self.name!r}")
        n = len(self.points)
        if len(self.up) != n:
            raise ValueError(f"below-relation arity mismatch in {self.name!r}")
        full = (1 << n) - 1
        for i, m in enumerate(self.up):
            if m & ~full:
                raise ValueError(f"below-relation out of range in {self.name!r}")
            if not (m >> i) & 1:
                raise ValueError(f"below must be reflexive in {self.name!r}")
        for i in range(n):
            m = self.up[i]
            acc = m
            for j in _bits(m):
                acc |= self.up[j]
            if acc != m:
                raise ValueError(f"below must be transitive in {self.name!r}")

    # identity-first equality: cached constructions hand back shared objects
    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Space):
            return NotImplemented
        return (
            self.name == other.name
            and self.points == other.points
            and self.up == other.up
        )

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.name, self.points, self.up))
            self.__dict__["_hash"] = h
        return h

    def __repr__(self) -> str:
        return f"Space({self.name!r}, {len(self.points)} points)"

    @cached_property
    def n(self) -> int:
        return len(self.points)

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    @cached_property
    def down(self) -> tuple[int, ...]:
        """Transpose of ``up``: down[j] = bitmask of i with i below j."""
        down = [0] * self.n
        for i, m in enumerate(self.up):
            for j in _bits(m):
                down[j] |= 1 << i
        return tuple(down)

    @cached_property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def opens(self) -> tuple[int, ...]:
        """All open sets as bitmasks, ascending.  Exponential: small spaces only."""
        if self.n > _OPENS_LIMIT:
            raise CapacityError(
                f"refusing to enumerate 2**{self.n} subsets of {self.name!r}"
            )
        out = []
        for s in range(1 << self.n):
            if self._is_open_mask(s):
                out.append(s)
        return tuple(out)

    @cached_property
    def opens_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    # -- point/set level helpers ------------------------------------------

    def point_index(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise ValueError(f"undeclared point {x!r} in space {self.name!r}") from None

    def mask_of(self, subset: Iterable[str]) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.point_index(x)
        return m

    def set_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in _bits(mask))

    def below(self, x: str, y: str) -> bool:
        """True iff x lies in the closure of {y}."""
        return bool((self.up[self.point_index(x)] >> self.point_index(y)) & 1)

    def closure(self, subset: Iterable[str]) -> frozenset[str]:
        """Least closed superset: the down-closure of the subset."""
        m = 0
        for x in subset:
            m |= self.down[self.point_index(x)]
        return self.set_of(m)

    def _is_open_mask(self, m: int) -> bool:
        for i in _bits(m):
            if self.up[i] & ~m:
                return False
        return True

    def is_open(self, subset: Iterable[str]) -> bool:
        return self._is_open_mask(self.mask_of(subset))

    def is_closed(self, subset: Iterable[str]) -> bool:
        m = self.mask_of(subset)
        for i in _bits(m):
            if self.down[i] & ~m:
                return False
        return True


def build_space(
    name: str,
    points: Sequence[str],
    below: Iterable[tuple[str, str]] = (),
) -> Space:
    """Construct a space from generating below-pairs.

    The pairs are closed off reflexively and transitively, so callers may
    hand in any generating relation (including cycles, which yield
    non-T0 spaces).
    """
    pts = tuple(points)
    if len(set(pts)) != len(pts):
        raise ValueError(f"duplicate point in space {name!r}")
    index = {p: i for i, p in enumerate(pts)}
    up = [1 << i for i in range(len(pts))]
    for x, y in below:
        if x not in index:
            raise ValueError(f"undeclared point {x!r} in below of {name!r}")
        if y not in index:
            raise ValueError(f"undeclared point {y!r} in below of {name!r}")
        up[index[x]] |= 1 << index[y]
    changed = True
    while changed:
        changed = False
        for i in range(len(pts)):
            acc = up[i]
            for j in _bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return Space(name, pts, tuple(up))


# -- stock spaces ---------------------------------------------------------


def discrete(n: int, name: str | None = None) -> Space:
    """n isolated points "0".."n-1": only comparabilities are reflexive."""
    pts = tuple(str(i) for i in range(n))
    return Space(name or f"discrete{n}", pts, tuple(1 << i for i in range(n)))


def indiscrete(n: int, name: str | None = None) -> Space:
    """n points "0".."n-1" with the full below-relation: opens are only {} and X."""
    pts = tuple(str(i) for i in range(n))
    full = (1 << n) - 1
    return Space(name or f"indiscrete{n}", pts, tuple(full for _ in range(n)))


def sierpinski(name: str = "sierpinski") -> Space:
    """Two points with s0 below s1; {s1} is open, {s0} is closed."""
    return build_space(name, ("s0", "s1"), (("s0", "s1"),))


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def chain(n: int, name: str | None = None) -> Space:
    """A linear order a < b < c < ...; letters for n <= 26, c0,c1,... beyond."""
    if n <= len(_LETTERS):
        pts = tuple(_LETTERS[:n])
    else:
        pts = tuple(f"c{i}" for i in range(n))
    up = tuple(((1 << n) - 1) ^ ((1 << i) - 1) for i in range(n))
    return Space(name or f"chain{n}", pts, up)


# -- maps -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PartialMap:
    """A partial map between finite spaces.

    ``table`` holds (point, value) rows ordered by domain point index.
    Continuity is not required: these are arbitrary set-level maps whose
    continuity is a property checked by :func:`is_continuous`.
    """

    name: str
    dom: Space
    cod: Space
    table: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        seen = set()
        for x, y in self.table:
            self.dom.point_index(x)
            self.cod.point_index(y)
            if x in seen:
                raise ValueError(f"duplicate row for {x!r} in map {self.name!r}")
            seen.add(x)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, PartialMap):
            return NotImplemented
        return (
            self.name == other.name
            and self.dom == other.dom
            and self.cod == other.cod
            and self.table == other.table
        )

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.name, self.dom, self.cod, self.table))
            self.__dict__["_hash"] = h
        return h

    def __repr__(self) -> str:
        kind = "TotalMap" if self.is_total else "PartialMap"
        return f"{kind}({self.name!r}: {self.dom.name} -> {self.cod.name})"

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.table)

    @cached_property
    def vec(self) -> tuple[int, ...]:
        """Value index per domain point index; -1 where undefined."""
        v = [-1] * self.dom.n
        for x, y in self.table:
            v[self.dom.index[x]] = self.cod.index[y]
        return tuple(v)

    @cached_property
    def def_mask(self) -> int:
        m = 0
        for i, v in enumerate(self.vec):
            if v >= 0:
                m |= 1 << i
        return m

    @cached_property
    def defined_on(self) -> frozenset[str]:
        return frozenset(x for x, _ in self.table)

    @cached_property
    def is_total(self) -> bool:
        return len(self.table) == self.dom.n

    def defined_at(self, x: str) -> bool:
        self.dom.point_index(x)
        return x in self.mapping

    def __call__(self, x: str) -> str:
        self.dom.point_index(x)
        try:
            return self.mapping[x]
        except KeyError:
            raise ValueError(f"map {self.name!r} undefined at {x!r}") from None


@dataclass(frozen=True, eq=False)
class TotalMap(PartialMap):
    """A partial map that happens to be defined everywhere."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.table) != self.dom.n:
            missing = sorted(set(self.dom.points) - {x for x, _ in self.table})
            raise ValueError(
                f"map {self.name!r} is not total (missing {', '.join(missing)})"
            )


def _normalize_table(
    dom: Space, cod: Space, mapping: Mapping[str, str] | Iterable[tuple[str, str]]
) -> tuple[tuple[str, str], ...]:
    entries = dict(mapping)
    for x in entries:
        dom.point_index(x)
    return tuple(
        (x, entries[x]) for x in dom.points if x in entries
    )


def partial_map(
    name: str,
    dom: Space,
    cod: Space,
    mapping: Mapping[str, str] | Iterable[tuple[str, str]],
) -> PartialMap:
    return PartialMap(name, dom, cod, _normalize_table(dom, cod, mapping))


def total_map(
    name: str,
    dom: Space,
    cod: Space,
    mapping: Mapping[str, str] | Iterable[tuple[str, str]],
) -> TotalMap:
    return TotalMap(name, dom, cod, _normalize_table(dom, cod, mapping))


def make_map(
    name: str,
    dom: Space,
    cod: Space,
    mapping: Mapping[str, str] | Iterable[tuple[str, str]],
) -> PartialMap:
    """Build a TotalMap when the table covers the domain, else a PartialMap."""
    table = _normalize_table(dom, cod, mapping)
    cls = TotalMap if len(table) == dom.n else PartialMap
    return cls(name, dom, cod, table)


def identity_map(space: Space, name: str | None = None) -> TotalMap:
    return TotalMap(
        name or f"id_{space.name}", space, space, tuple((p, p) for p in space.points)
    )


def constant_map(dom: Space, cod: Space, value: str, name: str | None = None) -> TotalMap:
    cod.point_index(value)
    return TotalMap(
        name or f"const_{value}", dom, cod, tuple((p, value) for p in dom.points)
    )


def empty_map(dom: Space, cod: Space, name: str | None = None) -> PartialMap:
    """The nowhere-defined map between two spaces."""
    return PartialMap(name or f"empty_{dom.name}_{cod.name}", dom, cod, ())


# -- continuity -----------------------------------------------------------


def is_continuous_at(f: PartialMap, x: str) -> bool:
    """Continuity at a point of definition: values may only go up.

    With minimal open neighbourhoods available, f is continuous at x iff
    f(y) lies above f(x) for every defined y above x.
    """
    i = f.dom.point_index(x)
    vi = f.vec[i]
    if vi < 0:
        raise ValueError(f"map {f.name!r} undefined at {x!r}")
    up_cod = f.cod.up
    vec = f.vec
    for j in _bits(f.dom.up[i] & f.def_mask):
        if not (up_cod[vi] >> vec[j]) & 1:
            return False
    return True


def is_continuous(f: PartialMap) -> bool:
    """Monotone on the domain of definition == continuous on the subspace."""
    vec = f.vec
    up_cod = f.cod.up
    dm = f.def_mask
    for i in _bits(dm):
        vi = vec[i]
        for j in _bits(f.dom.up[i] & dm):
            if not (up_cod[vi] >> vec[j]) & 1:
                return False
    return True


# -- products and coproducts ---------------------------------------------


class ProductResult(NamedTuple):
    space: Space
    projections: tuple[TotalMap, ...]
    origin: dict[str, tuple[str, ...]]


class CoproductResult(NamedTuple):
    space: Space
    injections: tuple[TotalMap, ...]
    origin: dict[str, tuple[str, str]]


@lru_cache(maxsize=None)
def _product_cached(spaces: tuple[Space, ...], name: str) -> ProductResult:
    k = len(spaces)
    combos = list(_iproduct(*(s.points for s in spaces)))
    pts = tuple("(" + ",".join(c) + ")" for c in combos)
    idx_combos = list(_iproduct(*(range(s.n) for s in spaces)))
    n = len(combos)
    up = [0] * n
    for a in range(n):
        ca = idx_combos[a]
        for b in range(n):
            cb = idx_combos[b]
            if all((spaces[t].up[ca[t]] >> cb[t]) & 1 for t in range(k)):
                up[a] |= 1 << b
    space = Space(name, pts, tuple(up))
    projections = tuple(
        TotalMap(
            f"pr{t}_{name}",
            space,
            spaces[t],
            tuple((pts[a], spaces[t].points[idx_combos[a][t]]) for a in range(n)),
        )
        for t in range(k)
    )
    origin = {pts[a]: combos[a] for a in range(n)}
    return ProductResult(space, projections, origin)


def product(spaces: Sequence[Space], name: str | None = None) -> ProductResult:
    """Topological product with componentwise below; empty products are rejected."""
    spaces = tuple(spaces)
    if not spaces:
        raise ValueError("empty product has no canonical point set; refusing")
    return _product_cached(
        spaces, name or "prod(" + ",".join(s.name for s in spaces) + ")"
    )


def product_space(a: Space, b: Space) -> Space:
    """Binary product space only; the common case in witness plumbing."""
    return product((a, b)).space


@lru_cache(maxsize=None)
def _coproduct_cached(
    spaces: tuple[Space, ...], tags: tuple[str, ...], name: str
) -> CoproductResult:
    pts: list[str] = []
    up: list[int] = []
    origin: dict[str, tuple[str, str]] = {}
    offsets: list[int] = []
    off = 0
    for tag, s in zip(tags, spaces):
        offsets.append(off)
        for i, p in enumerate(s.points):
            q = f"{tag}.{p}"
            pts.append(q)
            origin[q] = (tag, p)
            up.append(s.up[i] << off)
        off += s.n
    space = Space(name, tuple(pts), tuple(up))
    injections = tuple(
        TotalMap(
            f"in{tag}_{name}",
            s,
            space,
            tuple((p, f"{tag}.{p}") for p in s.points),
        )
        for tag, s in zip(tags, spaces)
    )
    return CoproductResult(space, injections, origin)


def coproduct(
    spaces: Sequence[Space],
    tags: Sequence[str] | None = None,
    name: str | None = None,
) -> CoproductResult:
    """Disjoint union; points are tagged "tag.point".  Empty family allowed."""
    spaces = tuple(spaces)
    if tags is None:
        tags = tuple(str(i) for i in range(len(spaces)))
    else:
        tags = tuple(tags)
    if len(tags) != len(spaces):
        raise ValueError("one tag per space required")
    if len(set(tags)) != len(tags):
        raise ValueError("coproduct tags must be unique")
    default = "coprod(" + ",".join(f"{t}.{s.name}" for t, s in zip(tags, spaces)) + ")"
    return _coproduct_cached(spaces, tags, name or default)


def subspace(space: Space, subset: Iterable[str], name: str | None = None) -> Space:
    """The induced preorder on a subset of points (order inherited)."""
    m = space.mask_of(subset)
    keep = [i for i in range(space.n) if (m >> i) & 1]
    pos = {i: k for k, i in enumerate(keep)}
    pts = tuple(space.points[i] for i in keep)
    up = []
    for i in keep:
        acc = 0
        for j in _bits(space.up[i] & m):
            acc |= 1 << pos[j]
        up.append(acc)
    return Space(name or f"{space.name}[{'+'.join(pts)}]", pts, tuple(up))


# -- map combinators ------------------------------------------------------


def compose(g: PartialMap, f: PartialMap, name: str | None = None) -> PartialMap:
    """g after f, defined where both stages are."""
    if f.cod != g.dom:
        raise SpaceMismatchError(
            f"cannot compose {g.name!r} after {f.name!r}: "
            f"{f.cod.name} != {g.dom.name}"
        )
    rows = {}
    for x, y in f.table:
        z = g.mapping.get(y)
        if z is not None:
            rows[x] = z
    return make_map(name or f"({g.name}.{f.name})", f.dom, g.cod, rows)


def delta(space: Space, name: str | None = None) -> TotalMap:
    """The diagonal x -> (x,x) into the binary self-product."""
    prod = product_space(space, space)
    return TotalMap(
        name or f"delta_{space.name}",
        space,
        prod,
        tuple((p, f"({p},{p})") for p in space.points),
    )


def pi_pair(f: PartialMap, g: PartialMap, name: str | None = None) -> PartialMap:
    """Componentwise pairing (x,y) -> (f x, g y) on the product spaces."""
    dom = product_space(f.dom, g.dom)
    cod = product_space(f.cod, g.cod)
    rows = {}
    for x, fx in f.table:
        for y, gy in g.table:
            rows[f"({x},{y})"] = f"({fx},{gy})"
    return make_map(name or f"({f.name}pi{g.name})", dom, cod, rows)


def pi_power(f: PartialMap, n: int, name: str | None = None) -> PartialMap:
    """n-fold componentwise power of a map on the flat n-ary product."""
    if n < 1:
        raise ValueError("power must be at least 1")
    if n == 1:
        return f
    dom = product([f.dom] * n).space
    cod = product([f.cod] * n).space
    dom_origin = product([f.dom] * n).origin
    rows = {}
    for p, combo in dom_origin.items():
        vals = [f.mapping.get(c) for c in combo]
        if all(v is not None for v in vals):
            rows[p] = "(" + ",".join(vals) + ")"  # type: ignore[arg-type]
    return make_map(name or f"{f.name}^{n}", dom, cod, rows)


def restrict(f: PartialMap, subset: Iterable[str], name: str | None = None) -> PartialMap:
    """Narrow the domain of definition; the domain space is unchanged."""
    m = f.dom.mask_of(subset)
    rows = [(x, y) for x, y in f.table if (m >> f.dom.index[x]) & 1]
    return make_map(name or f"{f.name}|", f.dom, f.cod, rows)


def map_equal(f: PartialMap, g: PartialMap) -> bool:
    """Same defined_on, pointwise equal values; names are ignored."""
    if f.dom != g.dom or f.cod != g.cod:
        raise SpaceMismatchError(
            f"map_equal needs matching spaces: {f.name!r} vs {g.name!r}"
        )
    return f.vec == g.vec


# -- problems and relations ----------------------------------------------


@dataclass(frozen=True, eq=False)
class Problem:
    """A finite set of partial maps sharing domain and codomain spaces.

    The spaces are carried explicitly so that the empty problem at a given
    type is representable.  Members are kept deduplicated (semantically,
    by table) and sorted by (name, table) for deterministic iteration.
    """

    name: str
    dom: Space
    cod: Space
    members: tuple[PartialMap, ...]

    def __post_init__(self) -> None:
        for m in self.members:
            if m.dom != self.dom or m.cod != self.cod:
                raise SpaceMismatchError(
                    f"member {m.name!r} of problem {self.name!r} has mismatched spaces"
                )

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Problem):
            return NotImplemented
        return (
            self.name == other.name
            and self.dom == other.dom
            and self.cod == other.cod
            and self.members == other.members
        )

    def __hash__(self) -> int:
        return hash((self.name, self.dom, self.cod, self.members))

    def __repr__(self) -> str:
        return f"Problem({self.name!r}, {len(self.members)} members)"

    @cached_property
    def member_vecs(self) -> frozenset[tuple[int, ...]]:
        return frozenset(m.vec for m in self.members)

    def contains(self, f: PartialMap) -> bool:
        if f.dom != self.dom or f.cod != self.cod:
            raise SpaceMismatchError(
                f"membership test with mismatched spaces in {self.name!r}"
            )
        return f.vec in self.member_vecs


def problem(
    name: str, dom: Space, cod: Space, members: Iterable[PartialMap] = ()
) -> Problem:
    uniq: dict[tuple[int, ...], PartialMap] = {}
    for m in members:
        if m.dom != dom or m.cod != cod:
            raise SpaceMismatchError(
                f"member {m.name!r} of problem {name!r} has mismatched spaces"
            )
        uniq.setdefault(m.vec, m)
    ordered = tuple(sorted(uniq.values(), key=lambda m: (m.name, m.table)))
    return Problem(name, dom, cod, ordered)


def singleton_problem(f: PartialMap, name: str | None = None) -> Problem:
    return problem(name or f"{{{f.name}}}", f.dom, f.cod, (f,))


@dataclass(frozen=True, eq=False)
class Relation:
    """A finite relation between the points of two spaces."""

    name: str
    dom: Space
    cod: Space
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        for x, y in self.pairs:
            self.dom.point_index(x)
            self.cod.point_index(y)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Relation):
            return NotImplemented
        return (
            self.name == other.name
            and self.dom == other.dom
            and self.cod == other.cod
            and self.pairs == other.pairs
        )

    def __hash__(self) -> int:
        return hash((self.name, self.dom, self.cod, self.pairs))

    def __repr__(self) -> str:
        return f"Relation({self.name!r}, {len(self.pairs)} pairs)"

    @cached_property
    def targets(self) -> dict[str, tuple[str, ...]]:
        out: dict[str, list[str]] = {}
        for x, y in self.pairs:
            out.setdefault(x, []).append(y)
        return {
            x: tuple(sorted(set(ys), key=self.cod.point_index))
            for x, ys in out.items()
        }


def relation(
    name: str, dom: Space, cod: Space, pairs: Iterable[tuple[str, str]]
) -> Relation:
    uniq = sorted(
        set(pairs), key=lambda p: (dom.point_index(p[0]), cod.point_index(p[1]))
    )
    return Relation(name, dom, cod, tuple(uniq))


def choice_functions(
    rel: Relation, cap: int = CHOICE_CAP, name: str | None = None
) -> Problem:
    """The problem of all pointwise selections from a relation.

    Selections are defined exactly on the points with at least one target;
    a relation with no pairs yields the problem whose one member is the
    nowhere-defined map.  The member count multiplies quickly, so it is
    checked against ``cap`` before anything is materialized.
    """
    sources = [x for x in rel.dom.points if x in rel.targets]
    count = 1
    for x in sources:
        count *= len(rel.targets[x])
        if count > cap:
            raise CapacityError(
                f"relation {rel.name!r} has more than {cap} choice functions"
            )
    base = name or f"cf({rel.name})"
    members = []
    for k, picks in enumerate(_iproduct(*(rel.targets[x] for x in sources))):
        members.append(
            PartialMap(f"{base}.c{k}", rel.dom, rel.cod, tuple(zip(sources, picks)))
        )
    return problem(base, rel.dom, rel.cod, members)
