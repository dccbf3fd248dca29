"""The .clt corpus format: declarations of spaces, maps, relations, and
problems in a line-oriented, diff-friendly text form.

Grammar (one declaration block per item, ``#`` starts a comment)::

    space NAME
      points a b c
      below a b
    end

    map NAME : DOM -> COD [partial]
      a -> x
    end

    relation NAME : DOM -> COD
      a -> x y
    end

    problem NAME : DOM -> COD
      members m1 m2
    end

``below a b`` declares a below b; the reflexive-transitive closure is
taken automatically.  A map without the ``partial`` marker must supply a
row for every point.  Serialization is canonical — points, rows, pairs,
and blocks are sorted — so ``serialize`` is a fixpoint under
``parse``/``serialize`` round trips, and two corpora are equal exactly
when their canonical texts coincide.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CorpusError
from .spaces import (
    PartialMap,
    Problem,
    Relation,
    Space,
    build_space,
    make_map,
    problem,
    relation,
)


@dataclass(eq=False)
class Corpus:
    spaces: dict[str, Space] = field(default_factory=dict)
    maps: dict[str, PartialMap] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    problems: dict[str, Problem] = field(default_factory=dict)

    def item(self, name: str):
        """Look up a declared item of any kind by name."""
        for pool in (self.maps, self.problems, self.relations, self.spaces):
            if name in pool:
                return pool[name]
        raise KeyError(f"nothing named {name!r} in the corpus")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return serialize(self) == serialize(other)

    def __hash__(self):
        return hash(serialize(self))


def _token_safe(text: str, what: str) -> str:
    if not text or any(c.isspace() for c in text) or "#" in text:
        raise CorpusError(f"{what} {text!r} is not a bare token")
    return text


# -- parsing --------------------------------------------------------------


def _split_header(parts: list[str], lineno: int) -> tuple[str, str, str]:
    # NAME : DOM -> COD
    if len(parts) != 5 or parts[1] != ":" or parts[3] != "->":
        raise CorpusError("expected 'NAME : DOM -> COD'", lineno)
    return parts[0], parts[2], parts[4]


def parse(text: str) -> Corpus:
    corpus = Corpus()
    block: str | None = None
    lines = text.splitlines()
    i = 0

    def resolve_space(name: str, lineno: int) -> Space:
        if name not in corpus.spaces:
            raise CorpusError(f"undeclared space {name!r}", lineno)
        return corpus.spaces[name]

    def declare(pool: dict, name: str, lineno: int):
        for kind, p in (
            ("space", corpus.spaces),
            ("map", corpus.maps),
            ("relation", corpus.relations),
            ("problem", corpus.problems),
        ):
            if p is pool and name in p:
                raise CorpusError(f"duplicate {kind} {name!r}", lineno)

    while i < len(lines):
        lineno = i + 1
        parts = lines[i].split("#", 1)[0].split()
        i += 1
        if not parts:
            continue
        head, rest = parts[0], parts[1:]
        if head == "space":
            if len(rest) != 1:
                raise CorpusError("expected 'space NAME'", lineno)
            name = rest[0]
            declare(corpus.spaces, name, lineno)
            points: list[str] = []
            below: list[tuple[str, str]] = []
            while True:
                if i >= len(lines):
                    raise CorpusError(f"space {name!r} never ends", lineno)
                lineno = i + 1
                parts = lines[i].split("#", 1)[0].split()
                i += 1
                if not parts:
                    continue
                if parts[0] == "end":
                    break
                if parts[0] == "points":
                    for p in parts[1:]:
                        if p in points:
                            raise CorpusError(f"duplicate point {p!r}", lineno)
                        points.append(p)
                elif parts[0] == "below":
                    if len(parts) != 3:
                        raise CorpusError("expected 'below X Y'", lineno)
                    for p in parts[1:]:
                        if p not in points:
                            raise CorpusError(f"undeclared point {p!r}", lineno)
                    below.append((parts[1], parts[2]))
                else:
                    raise CorpusError(f"unknown directive {parts[0]!r}", lineno)
            corpus.spaces[name] = build_space(name, points, below)
        elif head in ("map", "relation", "problem"):
            name, dom_name, cod_name = _split_header(
                rest[:5] if head == "map" else rest, lineno
            )
            marker = rest[5:] if head == "map" else []
            if marker and marker != ["partial"]:
                raise CorpusError(f"unexpected tokens {marker}", lineno)
            partial = bool(marker)
            declare(getattr(corpus, head + "s"), name, lineno)
            dom = resolve_space(dom_name, lineno)
            cod = resolve_space(cod_name, lineno)
            rows: list[tuple[str, list[str]]] = []
            members: list[str] = []
            opened = lineno
            while True:
                if i >= len(lines):
                    raise CorpusError(f"{head} {name!r} never ends", opened)
                lineno = i + 1
                parts = lines[i].split("#", 1)[0].split()
                i += 1
                if not parts:
                    continue
                if parts[0] == "end":
                    break
                if head == "problem":
                    if parts[0] != "members" or len(parts) < 2:
                        raise CorpusError("expected 'members NAME...'", lineno)
                    members.extend(parts[1:])
                    continue
                if len(parts) < 3 or parts[1] != "->":
                    raise CorpusError("expected 'POINT -> POINT...'", lineno)
                if head == "map" and len(parts) != 3:
                    raise CorpusError("map rows take one value", lineno)
                if parts[0] not in dom.index:
                    raise CorpusError(
                        f"{parts[0]!r} is not a point of {dom.name!r}", lineno
                    )
                targets = list(dict.fromkeys(parts[2:]))
                for p in targets:
                    if p not in cod.index:
                        raise CorpusError(
                            f"{p!r} is not a point of {cod.name!r}", lineno
                        )
                if parts[0] in {r[0] for r in rows}:
                    raise CorpusError(f"duplicate row for {parts[0]!r}", lineno)
                rows.append((parts[0], targets))
            if head == "map":
                table = {p: vs[0] for p, vs in rows}
                if not partial and len(table) != dom.n:
                    raise CorpusError(
                        f"map {name!r} is missing rows; mark it partial", opened
                    )
                corpus.maps[name] = make_map(name, dom, cod, table)
            elif head == "relation":
                pairs = [(p, v) for p, vs in rows for v in vs]
                corpus.relations[name] = relation(name, dom, cod, pairs)
            else:
                missing = [m for m in members if m not in corpus.maps]
                if missing:
                    raise CorpusError(f"undeclared map {missing[0]!r}", lineno)
                picked = []
                for m in dict.fromkeys(members):
                    f = corpus.maps[m]
                    if f.dom != dom or f.cod != cod:
                        raise CorpusError(
                            f"member {m!r} maps {f.dom.name} -> {f.cod.name}, "
                            f"not {dom_name} -> {cod_name}",
                            lineno,
                        )
                    picked.append(f)
                corpus.problems[name] = problem(name, dom, cod, picked)
        else:
            raise CorpusError(f"unknown declaration {head!r}", lineno)
    return corpus


# -- serialization --------------------------------------------------------


def _space_block(s: Space) -> str:
    lines = [f"space {_token_safe(s.name, 'space name')}"]
    pts = sorted(_token_safe(p, "point") for p in s.points)
    if pts:
        lines.append("  points " + " ".join(pts))
    pairs = sorted(
        (s.points[i], s.points[j])
        for i in range(s.n)
        for j in range(s.n)
        if i != j and (s.up[i] >> j) & 1
    )
    for a, b in pairs:
        lines.append(f"  below {a} {b}")
    lines.append("end")
    return "\n".join(lines)


def _map_block(m: PartialMap) -> str:
    head = (
        f"map {_token_safe(m.name, 'map name')} : "
        f"{m.dom.name} -> {m.cod.name}"
    )
    if not m.is_total:
        head += " partial"
    lines = [head]
    for p, v in sorted(m.table):
        lines.append(f"  {p} -> {v}")
    lines.append("end")
    return "\n".join(lines)


def _relation_block(r: Relation) -> str:
    lines = [
        f"relation {_token_safe(r.name, 'relation name')} : "
        f"{r.dom.name} -> {r.cod.name}"
    ]
    by_source: dict[str, list[str]] = {}
    for x, y in r.pairs:
        by_source.setdefault(x, []).append(y)
    for x in sorted(by_source):
        lines.append(f"  {x} -> " + " ".join(sorted(by_source[x])))
    lines.append("end")
    return "\n".join(lines)


def _problem_block(p: Problem) -> str:
    lines = [
        f"problem {_token_safe(p.name, 'problem name')} : "
        f"{p.dom.name} -> {p.cod.name}"
    ]
    if p.members:
        lines.append(
            "  members " + " ".join(sorted(m.name for m in p.members))
        )
    lines.append("end")
    return "\n".join(lines)


def serialize(corpus: Corpus) -> str:
    blocks = []
    for name in sorted(corpus.spaces):
        blocks.append(_space_block(corpus.spaces[name]))
    for name in sorted(corpus.maps):
        blocks.append(_map_block(corpus.maps[name]))
    for name in sorted(corpus.relations):
        blocks.append(_relation_block(corpus.relations[name]))
    for name in sorted(corpus.problems):
        blocks.append(_problem_block(corpus.problems[name]))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# -- assembly from live objects -------------------------------------------


def _add(pool: dict, kind: str, item) -> None:
    held = pool.get(item.name)
    if held is None:
        pool[item.name] = item
    elif held != item:
        raise CorpusError(f"{kind} name {item.name!r} used for two different items")


def corpus_from_items(items) -> Corpus:
    """Collect items plus everything they reference into one corpus."""
    corpus = Corpus()

    def add_space(s: Space):
        _add(corpus.spaces, "space", s)

    def add_map(m: PartialMap):
        add_space(m.dom)
        add_space(m.cod)
        _add(corpus.maps, "map", m)

    for item in items:
        if isinstance(item, Space):
            add_space(item)
        elif isinstance(item, PartialMap):
            add_map(item)
        elif isinstance(item, Relation):
            add_space(item.dom)
            add_space(item.cod)
            _add(corpus.relations, "relation", item)
        elif isinstance(item, Problem):
            add_space(item.dom)
            add_space(item.cod)
            for m in item.members:
                add_map(m)
            _add(corpus.problems, "problem", item)
        else:
            raise TypeError(f"cannot put {type(item).__name__} in a corpus")
    return corpus
