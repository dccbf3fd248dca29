"""Decision procedures for continuous reducibilities between maps.

Two notions are decided here, both parameterized by continuous reducing
maps and both returning explicit witnesses:

* ``le0`` (composition reducibility): f reduces to g when f = g . G for
  some continuous G between the domains; f and g must share a codomain.
* ``le2`` (one-query reducibility): f reduces to g when
  f = F . (id pi (g . G)) . delta for a continuous translation G and a
  continuous partial postprocessor F that may consult the original input
  alongside g's answer.

Problems (sets of partial maps) are compared uniformly: one (G, F) pair
must work for every member of the right-hand problem, sending it into the
left-hand problem.

Every returned witness is replayed against the defining equation before
it leaves this module; a successful decision can therefore be trusted
without re-deriving it.  Searches count candidate extensions against a
budget and raise :class:`CapacityError` when it runs out — exhaustion is
never reported as "no".
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct

from .errors import CapacityError, InvalidWitnessError, SpaceMismatchError
from .spaces import (
    PartialMap,
    Problem,
    Space,
    compose,
    delta,
    empty_map,
    identity_map,
    is_continuous,
    make_map,
    map_equal,
    pi_pair,
    pi_power,
    product,
    product_space,
)

DEFAULT_BUDGET = 10_000_000


class Budget:
    """Mutable countdown of candidate extensions for one decision call."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise CapacityError(f"search budget exhausted ({self.limit} nodes)")


def _as_budget(budget: int | Budget | None) -> Budget:
    if isinstance(budget, Budget):
        return budget
    return Budget(DEFAULT_BUDGET if budget is None else budget)


@dataclass(frozen=True)
class Witness0:
    """Evidence for a composition reduction: the translating map."""

    translation: PartialMap


@dataclass(frozen=True)
class Witness2:
    """Evidence for a one-query reduction.

    ``translation`` feeds the left input to the right-hand map;
    ``postprocess`` turns (input, answer) pairs into the left output.
    """

    translation: PartialMap
    postprocess: PartialMap


@dataclass(frozen=True)
class CtResult:
    """Outcome of a bounded parallel-copies comparison.

    ``copies`` is the least number of parallel copies that sufficed, or
    None when no count up to ``cap`` worked.
    """

    copies: int | None
    witness: Witness2 | None
    cap: int

    @property
    def yes(self) -> bool:
        return self.copies is not None


@dataclass(frozen=True)
class CompareResult:
    verdict: str  # equivalent | left-below | right-below | incomparable
    forward: object | None
    backward: object | None


# -- shared backtracking scaffolding --------------------------------------


def _comparable_prefix(space: Space, order: list[int]) -> list[list[tuple[int, int, int, int]]]:
    """For each search step, the earlier steps assigned to comparable points.

    Entries are (step, point, below_fwd, below_bwd) with below_fwd set when
    the earlier point lies below the current one.  Constraints in all the
    searches here are pairwise between comparable points, so pruning
    against exactly these suffices for completeness.
    """
    up = space.up
    prev: list[list[tuple[int, int, int, int]]] = []
    for k, i in enumerate(order):
        lst = []
        for k2 in range(k):
            i2 = order[k2]
            ab = (up[i2] >> i) & 1
            ba = (up[i] >> i2) & 1
            if ab or ba:
                lst.append((k2, i2, ab, ba))
        prev.append(lst)
    return prev


# -- le0 ------------------------------------------------------------------


def _le0_search(p: PartialMap, q: PartialMap, budget: Budget) -> list[int] | None:
    """Find G with q . G = p, G continuous and defined exactly on def(p)."""
    X1, X2 = p.dom, q.dom
    pv, qv = p.vec, q.vec
    order = [i for i in range(X1.n) if pv[i] >= 0]
    fibers = {
        v: [j for j in range(X2.n) if qv[j] == v] for v in set(pv) if v >= 0
    }
    if any(not fibers[pv[i]] for i in order):
        return None
    prev = _comparable_prefix(X1, order)
    upc = X2.up
    assign = [-1] * len(order)

    def bt(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for j in fibers[pv[i]]:
            budget.spend()
            ok = True
            for k2, _i2, ab, ba in prev[k]:
                j2 = assign[k2]
                if ab and not (upc[j2] >> j) & 1:
                    ok = False
                    break
                if ba and not (upc[j] >> j2) & 1:
                    ok = False
                    break
            if ok:
                assign[k] = j
                if bt(k + 1):
                    return True
        return False

    if not bt(0):
        return None
    out = [-1] * X1.n
    for k, i in enumerate(order):
        out[i] = assign[k]
    return out


def _witness0_from_vec(p: PartialMap, q: PartialMap, gvec: list[int]) -> Witness0:
    rows = {
        p.dom.points[i]: q.dom.points[j] for i, j in enumerate(gvec) if j >= 0
    }
    g = make_map(f"G[{p.name},{q.name}]", p.dom, q.dom, rows)
    return Witness0(g)


def le0_map(
    p: PartialMap, q: PartialMap, budget: int | Budget | None = None
) -> Witness0 | None:
    """Composition reducibility between single partial maps.

    This is the singleton-problem reading: a continuous partial G with
    q . G = p exactly (domains of definition included).
    """
    if p.cod != q.cod:
        raise SpaceMismatchError(
            f"le0 needs a common codomain: {p.name!r} vs {q.name!r}"
        )
    b = _as_budget(budget)
    gvec = _le0_search(p, q, b)
    if gvec is None:
        return None
    w = _witness0_from_vec(p, q, gvec)
    if not verify_witness0(p, q, w):
        raise InvalidWitnessError("le0 witness failed to replay")  # pragma: no cover
    return w


def le0_fn(
    f: PartialMap, g: PartialMap, budget: int | Budget | None = None
) -> Witness0 | None:
    """Composition reducibility between total maps (functions)."""
    if not f.is_total or not g.is_total:
        raise ValueError("le0_fn expects total maps")
    return le0_map(f, g, budget)


def le0_problem(
    P: Problem, Q: Problem, budget: int | Budget | None = None
) -> Witness0 | None:
    """One continuous partial G with g . G in P for every g in Q."""
    if P.cod != Q.cod:
        raise SpaceMismatchError(
            f"le0 needs a common codomain: {P.name!r} vs {Q.name!r}"
        )
    b = _as_budget(budget)
    X1, X2 = P.dom, Q.dom
    if not Q.members:
        w = Witness0(empty_map(X1, X2, f"G[{P.name},{Q.name}]"))
        assert verify_witness0(P, Q, w)
        return w
    order = list(range(X1.n))
    prev = _comparable_prefix(X1, order)
    upc = X2.up
    qvecs = [m.vec for m in Q.members]
    member_vecs = P.member_vecs
    assign = [-1] * X1.n
    options = [-1] + list(range(X2.n))
    spend = b.spend

    def leaf_ok() -> bool:
        for qv in qvecs:
            comp = tuple(
                qv[assign[i]] if assign[i] >= 0 else -1 for i in range(X1.n)
            )
            if comp not in member_vecs:
                return False
        return True

    def bt(k: int) -> bool:
        if k == X1.n:
            return leaf_ok()
        i = order[k]
        for j in options:
            spend()
            if j >= 0:
                ok = True
                for k2, _i2, ab, ba in prev[k]:
                    j2 = assign[k2]
                    if j2 < 0:
                        continue
                    if ab and not (upc[j2] >> j) & 1:
                        ok = False
                        break
                    if ba and not (upc[j] >> j2) & 1:
                        ok = False
                        break
                if not ok:
                    continue
            assign[i] = j
            if bt(k + 1):
                return True
            assign[i] = -1
        return False

    if not bt(0):
        return None
    w = Witness0(
        make_map(
            f"G[{P.name},{Q.name}]",
            X1,
            X2,
            {X1.points[i]: X2.points[j] for i, j in enumerate(assign) if j >= 0},
        )
    )
    if not verify_witness0(P, Q, w):
        raise InvalidWitnessError("le0 witness failed to replay")  # pragma: no cover
    return w


# -- le2: fast engine -----------------------------------------------------


def _le2_fast_search(p: PartialMap, q: PartialMap, budget: Budget) -> list[int] | None:
    """Search a continuous G on def(p) passing the forced-postprocessor test.

    The postprocessor is determined on reachable pairs by the defining
    equation, and its continuity there is equivalent to the pairwise
    condition checked during assignment: whenever x <= x' and the queried
    answers satisfy q(G x) <= q(G x'), the targets must satisfy
    p(x) <= p(x').
    """
    X1, X2 = p.dom, q.dom
    pv, qv = p.vec, q.vec
    order = [i for i in range(X1.n) if pv[i] >= 0]
    cands = [j for j in range(X2.n) if qv[j] >= 0]
    if order and not cands:
        return None
    prev = _comparable_prefix(X1, order)
    upc = X2.up
    upP = p.cod.up
    upQ = q.cod.up
    assign = [-1] * len(order)
    spend = budget.spend

    def bt(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for j in cands:
            spend()
            ok = True
            for k2, i2, ab, ba in prev[k]:
                j2 = assign[k2]
                if ab:
                    if not (upc[j2] >> j) & 1:
                        ok = False
                        break
                    if (upQ[qv[j2]] >> qv[j]) & 1 and not (upP[pv[i2]] >> pv[i]) & 1:
                        ok = False
                        break
                if ba:
                    if not (upc[j] >> j2) & 1:
                        ok = False
                        break
                    if (upQ[qv[j]] >> qv[j2]) & 1 and not (upP[pv[i]] >> pv[i2]) & 1:
                        ok = False
                        break
            if ok:
                assign[k] = j
                if bt(k + 1):
                    return True
        return False

    if not bt(0):
        return None
    out = [-1] * X1.n
    for k, i in enumerate(order):
        out[i] = assign[k]
    return out


def _witness2_from_gvec(
    p: PartialMap, q: PartialMap, gvec: list[int]
) -> Witness2:
    X1, Y2 = p.dom, q.cod
    g = make_map(
        f"G[{p.name},{q.name}]",
        X1,
        q.dom,
        {X1.points[i]: q.dom.points[j] for i, j in enumerate(gvec) if j >= 0},
    )
    prod = product_space(X1, Y2)
    rows = {}
    for i, j in enumerate(gvec):
        if j < 0:
            continue
        answer = Y2.points[q.vec[j]]
        rows[f"({X1.points[i]},{answer})"] = p.cod.points[p.vec[i]]
    f = make_map(f"F[{p.name},{q.name}]", prod, p.cod, rows)
    return Witness2(g, f)


def le2_map(
    p: PartialMap, q: PartialMap, budget: int | Budget | None = None
) -> Witness2 | None:
    """One-query reducibility between single partial maps."""
    b = _as_budget(budget)
    gvec = _le2_fast_search(p, q, b)
    if gvec is None:
        return None
    w = _witness2_from_gvec(p, q, gvec)
    if not verify_witness2(p, q, w):
        raise InvalidWitnessError("le2 witness failed to replay")  # pragma: no cover
    return w


# -- le2: oracle engine ---------------------------------------------------


@lru_cache(maxsize=None)
def _open_continuous_totals(dom: Space, cod: Space) -> tuple[tuple[int, ...], ...]:
    """All total maps dom -> cod whose open preimages are open, lex order.

    Deliberately definitional: candidate tables are filtered by checking
    every open of the codomain, not by monotonicity.
    """
    opens_dom = dom.opens_set
    opens_cod = cod.opens
    out = []
    for vec in _iproduct(range(cod.n), repeat=dom.n):
        for u in opens_cod:
            pre = 0
            for i, v in enumerate(vec):
                if (u >> v) & 1:
                    pre |= 1 << i
            if pre not in opens_dom:
                break
        else:
            out.append(vec)
    return tuple(out)


def _le2_oracle_search(
    f: PartialMap, g: PartialMap, budget: Budget
) -> list[int] | None:
    """Enumerate definitionally continuous translations, checking the forced
    postprocessor's open preimages on the reachable subspace."""
    X1, Y1, Y2 = f.dom, f.cod, g.cod
    fv, gv = f.vec, g.vec
    up1 = X1.up
    upY2 = Y2.up
    opens1 = Y1.opens
    for gvec in _open_continuous_totals(X1, g.dom):
        budget.spend()
        h = [gv[j] for j in gvec]
        pairs = [
            (i, i2)
            for i in range(X1.n)
            for i2 in range(X1.n)
            if i != i2 and (up1[i] >> i2) & 1 and (upY2[h[i]] >> h[i2]) & 1
        ]
        ok = True
        for u in opens1:
            for i, i2 in pairs:
                if (u >> fv[i]) & 1 and not (u >> fv[i2]) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return list(gvec)
    return None


_LE2_ENGINES = ("fast", "oracle")


def le2_fn(
    f: PartialMap,
    g: PartialMap,
    engine: str = "fast",
    budget: int | Budget | None = None,
) -> Witness2 | None:
    """One-query reducibility between total maps, by either engine.

    The fast engine backtracks over continuous translations with the
    forced-postprocessor condition checked pairwise; the oracle engine
    enumerates translations filtered by open preimages and checks the
    postprocessor definitionally.  Both replay their witness before
    returning.
    """
    if not f.is_total or not g.is_total:
        raise ValueError("le2_fn expects total maps; use le2_map for partial ones")
    if engine not in _LE2_ENGINES:
        raise ValueError(f"unknown engine {engine!r}; pick one of {_LE2_ENGINES}")
    b = _as_budget(budget)
    if engine == "fast":
        gvec = _le2_fast_search(f, g, b)
    else:
        gvec = _le2_oracle_search(f, g, b)
    if gvec is None:
        return None
    w = _witness2_from_gvec(f, g, gvec)
    if not verify_witness2(f, g, w):
        raise InvalidWitnessError("le2 witness failed to replay")  # pragma: no cover
    return w


# -- le2 for problems -----------------------------------------------------


def le2_problem(
    P: Problem, Q: Problem, budget: int | Budget | None = None
) -> Witness2 | None:
    """One (G, F) pair sending every member of Q into P.

    The composite for member g is defined at x only when G, g and F are
    all defined along the way; it must equal some member of P exactly.
    The postprocessor is searched over the pairs actually reachable from
    some member, which loses no generality.
    """
    b = _as_budget(budget)
    X1, Y1, X2, Y2 = P.dom, P.cod, Q.dom, Q.cod
    prod = product_space(X1, Y2)
    if not Q.members:
        w = Witness2(
            empty_map(X1, X2, f"G[{P.name},{Q.name}]"),
            empty_map(prod, Y1, f"F[{P.name},{Q.name}]"),
        )
        assert verify_witness2(P, Q, w)
        return w
    order = list(range(X1.n))
    prev = _comparable_prefix(X1, order)
    upc = X2.up
    up1 = X1.up
    upY2 = Y2.up
    qvecs = [m.vec for m in Q.members]
    member_vecs = P.member_vecs
    g_assign = [-1] * X1.n
    g_options = [-1] + list(range(X2.n))
    spend = b.spend

    found: list[tuple[list[int], dict[tuple[int, int], int]]] = []

    def f_search(reach: list[tuple[int, int]]) -> dict[tuple[int, int], int] | None:
        f_assign: dict[tuple[int, int], int] = {}
        f_options = [-1] + list(range(Y1.n))

        def leaf_ok() -> bool:
            for qv in qvecs:
                comp = []
                for i in range(X1.n):
                    j = g_assign[i]
                    if j < 0 or qv[j] < 0:
                        comp.append(-1)
                        continue
                    comp.append(f_assign.get((i, qv[j]), -1))
                if tuple(comp) not in member_vecs:
                    return False
            return True

        def bt(k: int) -> bool:
            if k == len(reach):
                return leaf_ok()
            i, y = reach[k]
            for v in f_options:
                spend()
                if v >= 0:
                    ok = True
                    for k2 in range(k):
                        i2, y2 = reach[k2]
                        v2 = f_assign.get((i2, y2), -1)
                        if v2 < 0:
                            continue
                        if (up1[i2] >> i) & 1 and (upY2[y2] >> y) & 1:
                            if not (Y1.up[v2] >> v) & 1:
                                ok = False
                                break
                        if (up1[i] >> i2) & 1 and (upY2[y] >> y2) & 1:
                            if not (Y1.up[v] >> v2) & 1:
                                ok = False
                                break
                    if not ok:
                        continue
                    f_assign[(i, y)] = v
                else:
                    f_assign.pop((i, y), None)
                if bt(k + 1):
                    return True
            f_assign.pop((i, y), None)
            return False

        return dict(f_assign) if bt(0) else None

    def g_bt(k: int) -> bool:
        if k == X1.n:
            reach = sorted(
                {
                    (i, qv[g_assign[i]])
                    for qv in qvecs
                    for i in range(X1.n)
                    if g_assign[i] >= 0 and qv[g_assign[i]] >= 0
                }
            )
            res = f_search(reach)
            if res is not None:
                found.append((list(g_assign), res))
                return True
            return False
        i = order[k]
        for j in g_options:
            spend()
            if j >= 0:
                ok = True
                for k2, _i2, ab, ba in prev[k]:
                    j2 = g_assign[k2]
                    if j2 < 0:
                        continue
                    if ab and not (upc[j2] >> j) & 1:
                        ok = False
                        break
                    if ba and not (upc[j] >> j2) & 1:
                        ok = False
                        break
                if not ok:
                    continue
            g_assign[i] = j
            if g_bt(k + 1):
                return True
            g_assign[i] = -1
        return False

    if not g_bt(0):
        return None
    gvec, f_table = found[0]
    g = make_map(
        f"G[{P.name},{Q.name}]",
        X1,
        X2,
        {X1.points[i]: X2.points[j] for i, j in enumerate(gvec) if j >= 0},
    )
    rows = {
        f"({X1.points[i]},{Y2.points[y]})": Y1.points[v]
        for (i, y), v in f_table.items()
        if v >= 0
    }
    fmap = make_map(f"F[{P.name},{Q.name}]", prod, Y1, rows)
    w = Witness2(g, fmap)
    if not verify_witness2(P, Q, w):
        raise InvalidWitnessError("le2 witness failed to replay")  # pragma: no cover
    return w


# -- bounded parallel copies ---------------------------------------------


def le_ct(
    f: PartialMap,
    g: PartialMap,
    cap: int = 3,
    budget: int | Budget | None = None,
) -> CtResult:
    """Least number of parallel copies of g (up to cap) that one query beats.

    Decides f <=2 g^n for n = 1, 2, ..., cap in turn; the budget is shared
    across all the attempts.
    """
    if not f.is_total or not g.is_total:
        raise ValueError("le_ct expects total maps")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    b = _as_budget(budget)
    for n in range(1, cap + 1):
        gn = pi_power(g, n)
        w = le2_fn(f, gn, budget=b)
        if w is not None:
            return CtResult(n, w, cap)
    return CtResult(None, None, cap)


# -- two-sided comparison -------------------------------------------------


def _decide_one(a, b, relation: str, budget, cap: int):
    if isinstance(a, Problem) != isinstance(b, Problem):
        raise SpaceMismatchError("cannot compare a map with a problem")
    if relation == "le0":
        if isinstance(a, Problem):
            return le0_problem(a, b, budget)
        return le0_map(a, b, budget)
    if relation == "le2":
        if isinstance(a, Problem):
            return le2_problem(a, b, budget)
        return le2_map(a, b, budget)
    if relation == "lect":
        if isinstance(a, Problem):
            raise ValueError("lect compares total maps only")
        res = le_ct(a, b, cap, budget)
        return res if res.yes else None
    raise ValueError(f"unknown relation {relation!r}")


def compare(
    a: PartialMap | Problem,
    b: PartialMap | Problem,
    relation: str = "le2",
    budget: int | Budget | None = None,
    cap: int = 3,
) -> CompareResult:
    """Decide both directions and classify the pair."""
    forward = _decide_one(a, b, relation, budget, cap)
    backward = _decide_one(b, a, relation, budget, cap)
    if forward and backward:
        verdict = "equivalent"
    elif forward:
        verdict = "left-below"
    elif backward:
        verdict = "right-below"
    else:
        verdict = "incomparable"
    return CompareResult(verdict, forward, backward)


# -- replay and verification ---------------------------------------------


def replay0(w: Witness0, g: PartialMap) -> PartialMap:
    """The composite g . G that a le0 witness claims equals the left map."""
    return compose(g, w.translation)


def replay2(w: Witness2, g: PartialMap) -> PartialMap:
    """The defining composite F . (id pi (g . G)) . delta, built literally."""
    X1 = w.translation.dom
    inner = compose(pi_pair(identity_map(X1), compose(g, w.translation)), delta(X1))
    return compose(w.postprocess, inner)


def verify_witness0(
    lhs: PartialMap | Problem, rhs: PartialMap | Problem, w: Witness0
) -> bool:
    """Replay a composition witness against its defining equation."""
    g = w.translation
    if g.dom != lhs.dom or g.cod != rhs.dom:
        return False
    if not is_continuous(g):
        return False
    if isinstance(lhs, Problem) != isinstance(rhs, Problem):
        return False
    if isinstance(rhs, Problem):
        return all(lhs.contains(replay0(w, m)) for m in rhs.members)
    return map_equal(replay0(w, rhs), lhs)


def verify_witness2(
    lhs: PartialMap | Problem, rhs: PartialMap | Problem, w: Witness2
) -> bool:
    """Replay a one-query witness against its defining equation."""
    g, f = w.translation, w.postprocess
    if g.dom != lhs.dom or g.cod != rhs.dom:
        return False
    if f.dom != product_space(lhs.dom, rhs.cod) or f.cod != lhs.cod:
        return False
    if not is_continuous(g) or not is_continuous(f):
        return False
    if isinstance(lhs, Problem) != isinstance(rhs, Problem):
        return False
    if isinstance(rhs, Problem):
        return all(lhs.contains(replay2(w, m)) for m in rhs.members)
    return map_equal(replay2(w, rhs), lhs)


def witness0_to_witness2(
    lhs: PartialMap | Problem, rhs: PartialMap | Problem, w: Witness0
) -> Witness2:
    """A composition reduction is a one-query reduction that ignores the input."""
    prod = product((lhs.dom, rhs.cod))
    return Witness2(w.translation, prod.projections[1])


def compose_witness0(w_ab: Witness0, w_bc: Witness0) -> Witness0:
    """Transitivity: chain the translations."""
    return Witness0(compose(w_bc.translation, w_ab.translation))


def compose_witness2(w_ab: Witness2, w_bc: Witness2, far_cod: Space) -> Witness2:
    """Transitivity for one-query reductions.

    The composed translation chains the two; the composed postprocessor
    first lets the middle stage interpret the answer, then the outer one:
    F(x, z) = F_ab(x, F_bc(G_ab x, z)).  ``far_cod`` is the codomain of
    the right-hand end of the chain (the answer space of the far map).
    """
    g_ab, f_ab = w_ab.translation, w_ab.postprocess
    g_bc, f_bc = w_bc.translation, w_bc.postprocess
    g = compose(g_bc, g_ab)
    X1 = g_ab.dom
    prod = product((X1, far_cod))
    rows = {}
    for pt, (x, z) in prod.origin.items():
        mid_input = g_ab.mapping.get(x)
        if mid_input is None:
            continue
        mid_answer = f_bc.mapping.get(f"({mid_input},{z})")
        if mid_answer is None:
            continue
        val = f_ab.mapping.get(f"({x},{mid_answer})")
        if val is None:
            continue
        rows[pt] = val
    f = make_map(
        f"F[{f_ab.name}.{f_bc.name}]", prod.space, f_ab.cod, rows
    )
    return Witness2(g, f)
