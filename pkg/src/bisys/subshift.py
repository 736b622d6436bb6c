"""Subshift presentations and the word/state-set calculus over them.

Three input flavours: a 0/1 transition matrix over state symbols, a labeled
directed graph (sofic presentation), and a forbidden-word list.  Forbidden
words are recoded to a block transition matrix on parse, so everything
downstream sees only the first two flavours.  Words are flat tuples of symbol
names.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Alphabet


class SubshiftError(ValueError):
    pass


@dataclass(frozen=True)
class SftMatrix:
    """Square 0/1 matrix over state symbols; sequences of states are the points."""

    entries: tuple  # tuple[tuple[int, ...], ...]
    symbols: tuple  # state symbol names, one per index

    def __post_init__(self):
        n = self.size
        if len(self.symbols) != n or any(len(r) != n for r in self.entries):
            raise SubshiftError("matrix shape and symbol count disagree")
        if any(v not in (0, 1) for r in self.entries for v in r):
            raise SubshiftError("matrix entries must be 0 or 1")
        for i in range(n):
            if not any(self.entries[i][j] for j in range(n)):
                raise SubshiftError(f"zero row at state {self.symbols[i]}")
            if not any(self.entries[j][i] for j in range(n)):
                raise SubshiftError(f"zero column at state {self.symbols[i]}")

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class LabeledGraph:
    """Finite labeled directed graph; every state must be unstranded."""

    states: tuple
    edges: tuple  # tuple[(state, state, label str), ...]

    def __post_init__(self):
        sset = set(self.states)
        if len(sset) != len(self.states):
            raise SubshiftError("duplicate states")
        for (s, t, a) in self.edges:
            if s not in sset or t not in sset:
                raise SubshiftError(f"edge ({s},{t},{a}) leaves the state set")
        outs = {s for (s, _, _) in self.edges}
        ins = {t for (_, t, _) in self.edges}
        for q in self.states:
            if q not in outs:
                raise SubshiftError(f"state {q} has no outgoing edge")
            if q not in ins:
                raise SubshiftError(f"state {q} has no incoming edge")

    @property
    def labels(self) -> tuple:
        return tuple(sorted({a for (_, _, a) in self.edges}))

    def is_right_resolving(self) -> bool:
        seen = set()
        for (s, _, a) in self.edges:
            if (s, a) in seen:
                return False
            seen.add((s, a))
        return True

    def is_left_resolving(self) -> bool:
        seen = set()
        for (_, t, a) in self.edges:
            if (t, a) in seen:
                return False
            seen.add((t, a))
        return True

    def is_irreducible(self) -> bool:
        """Strong connectivity of the underlying digraph."""
        adj: dict = {q: [] for q in self.states}
        radj: dict = {q: [] for q in self.states}
        for (s, t, _) in self.edges:
            adj[s].append(t)
            radj[t].append(s)

        def reach(start, nbrs):
            seen = {start}
            stack = [start]
            while stack:
                for t in nbrs[stack.pop()]:
                    if t not in seen:
                        seen.add(t)
                        stack.append(t)
            return seen

        q0 = self.states[0]
        return len(reach(q0, adj)) == len(self.states) and len(
            reach(q0, radj)
        ) == len(self.states)


def sft_graph(m: SftMatrix) -> LabeledGraph:
    """State graph of an SFT: edge i -> j labeled by the target state symbol."""
    edges = []
    for i, row in enumerate(m.entries):
        for j, v in enumerate(row):
            if v:
                edges.append((m.symbols[i], m.symbols[j], m.symbols[j]))
    return LabeledGraph(tuple(m.symbols), tuple(edges))


def higher_block_recode(symbols, forbidden) -> SftMatrix:
    """SFT on (k-1)-blocks equivalent to the forbidden-word subshift.

    k is the longest forbidden length (at least 2).  Block symbols are the
    joined letters; stranded blocks are pruned until the matrix has no zero
    row or column.
    """
    symbols = tuple(symbols)
    forbidden = [tuple(w) for w in forbidden]
    if any(len(w) < 2 for w in forbidden):
        raise SubshiftError("forbidden words must have length >= 2")
    k = max((len(w) for w in forbidden), default=2)

    def clean(w) -> bool:
        for f in forbidden:
            m = len(f)
            if any(w[i : i + m] == f for i in range(len(w) - m + 1)):
                return False
        return True

    blocks = [()]
    for _ in range(k - 1):
        blocks = [b + (a,) for b in blocks for a in symbols if clean(b + (a,))]
    blocks = sorted(blocks)
    allowed = {
        (b, c) for b in blocks for c in blocks if b[1:] == c[:-1] and clean(b + c[-1:])
    }
    # prune states with no successor or no predecessor
    alive = set(blocks)
    changed = True
    while changed:
        changed = False
        for b in sorted(alive):
            if not any((b, c) in allowed and c in alive for c in alive) or not any(
                (c, b) in allowed and c in alive for c in alive
            ):
                alive.discard(b)
                changed = True
    if not alive:
        raise SubshiftError("every word is forbidden: empty language")
    blocks = sorted(alive)
    names = tuple("".join(b) for b in blocks)
    grid = tuple(
        tuple(1 if (b, c) in allowed else 0 for c in blocks) for b in blocks
    )
    return SftMatrix(grid, names)


@dataclass(frozen=True)
class SubshiftPresentation:
    """One of: sft matrix, sofic labeled graph, forbidden-word list.

    Forbidden-word inputs are recoded to an SFT immediately; ``block_decode``
    then maps each block symbol back to its letter word.
    """

    kind: str  # "sft" | "sofic"
    sft: SftMatrix | None = None
    sofic: LabeledGraph | None = None
    block_decode: tuple = ()  # ((block symbol, letter word), ...) for recoded inputs

    @staticmethod
    def from_sft(m: SftMatrix) -> "SubshiftPresentation":
        return SubshiftPresentation("sft", sft=m)

    @staticmethod
    def from_graph(g: LabeledGraph) -> "SubshiftPresentation":
        return SubshiftPresentation("sofic", sofic=g)

    @staticmethod
    def from_forbidden(symbols, words) -> "SubshiftPresentation":
        if not words:
            n = len(tuple(symbols))
            m = SftMatrix(tuple(tuple(1 for _ in range(n)) for _ in range(n)), tuple(symbols))
            return SubshiftPresentation("sft", sft=m)
        m = higher_block_recode(symbols, words)
        decode = tuple((s, tuple(s)) for s in m.symbols)
        return SubshiftPresentation("sft", sft=m, block_decode=decode)

    @property
    def graph(self) -> LabeledGraph:
        return self.sofic if self.kind == "sofic" else sft_graph(self.sft)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.of(*self.graph.labels)


def _edges_by_label(g: LabeledGraph) -> dict:
    by: dict = {}
    for (s, t, a) in g.edges:
        by.setdefault(a, []).append((s, t))
    return by


def admissible_words(pres: SubshiftPresentation, n: int):
    """All length-n label words of the presentation, length-then-lex sorted."""
    if n < 0:
        raise SubshiftError("word length must be >= 0")
    g = pres.graph
    by = _edges_by_label(g)
    frontier = {(): frozenset(g.states)}
    for _ in range(n):
        nxt: dict = {}
        for w, ends in frontier.items():
            for a, pairs in by.items():
                targets = frozenset(t for (s, t) in pairs if s in ends)
                if targets:
                    key = w + (a,)
                    nxt[key] = nxt.get(key, frozenset()) | targets
        frontier = nxt
    return tuple(sorted(frontier))


def _step_right(g: LabeledGraph, rel, a):
    """Relation composition with the one-symbol relation of ``a`` on the right."""
    by = _edges_by_label(g).get(a, ())
    out = set()
    for (p, q) in rel:
        for (s, t) in by:
            if s == q:
                out.add((p, t))
    return frozenset(out)


def _step_left(g: LabeledGraph, a, rel):
    by = _edges_by_label(g).get(a, ())
    out = set()
    for (s, t) in by:
        for (p, q) in rel:
            if p == t:
                out.add((s, q))
    return frozenset(out)


def _word_relation(g: LabeledGraph, w) -> frozenset:
    rel = frozenset((q, q) for q in g.states)
    for a in w:
        rel = _step_right(g, rel, a)
    return rel


def past_state_set(g: LabeledGraph, w) -> frozenset:
    """States reachable at the right end of w by arbitrarily long left extensions.

    Because no state of a presentation is stranded, this is exactly the set of
    endpoints of paths labeled w.
    """
    rel = _word_relation(g, w)
    if not rel:
        raise SubshiftError(f"word {''.join(w)!r} is not admissible")
    return frozenset(q for (_, q) in rel)


def future_state_set(g: LabeledGraph, w) -> frozenset:
    rel = _word_relation(g, w)
    if not rel:
        raise SubshiftError(f"word {''.join(w)!r} is not admissible")
    return frozenset(p for (p, _) in rel)


def past_state_stable(g: LabeledGraph, w) -> bool:
    """True when no admissible one-symbol left extension shrinks the past set."""
    base = past_state_set(g, w)
    for a in g.labels:
        rel = _word_relation(g, (a,) + tuple(w))
        if rel and frozenset(q for (_, q) in rel) != base:
            return False
    return True


def future_state_stable(g: LabeledGraph, w) -> bool:
    base = future_state_set(g, w)
    for a in g.labels:
        rel = _word_relation(g, tuple(w) + (a,))
        if rel and frozenset(p for (p, _) in rel) != base:
            return False
    return True


def step_past(g: LabeledGraph, pset, a) -> frozenset:
    """Past set after appending ``a`` on the right of the left ray."""
    by = _edges_by_label(g).get(a, ())
    return frozenset(t for (s, t) in by if s in pset)


def step_future(g: LabeledGraph, a, fset) -> frozenset:
    """Future set after prepending ``a`` at the start of the right ray."""
    by = _edges_by_label(g).get(a, ())
    return frozenset(s for (s, t) in by if t in fset)


def fill_in_words(g: LabeledGraph, pset, fset, n: int):
    """Labels of length-n paths from a state of pset to a state of fset."""
    if n == 0:
        return ((),) if set(pset) & set(fset) else ()
    by = _edges_by_label(g)
    frontier = {(): frozenset(pset)}
    for _ in range(n):
        nxt: dict = {}
        for w, ends in frontier.items():
            for a, pairs in by.items():
                targets = frozenset(t for (s, t) in pairs if s in ends)
                if targets:
                    key = w + (a,)
                    nxt[key] = nxt.get(key, frozenset()) | targets
        frontier = nxt
    return tuple(sorted(w for w, ends in frontier.items() if ends & frozenset(fset)))


def realizable_past_sets(g: LabeledGraph):
    """All stabilized past sets of left-infinite admissible rays.

    Walks the finite automaton of word relations (composing prepended symbols
    on the left); a set qualifies exactly when some relation with that range
    lies on a range-preserving cycle reachable from the identity relation.
    """
    ident = frozenset((q, q) for q in g.states)
    seen = {ident}
    succ: dict = {}
    stack = [ident]
    while stack:
        rel = stack.pop()
        outs = []
        for a in g.labels:
            nxt = _step_left(g, a, rel)
            if nxt:
                outs.append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        succ[rel] = outs
    return _ranges_on_constant_cycles(seen, succ, lambda rel: frozenset(q for (_, q) in rel))


def realizable_future_sets(g: LabeledGraph):
    ident = frozenset((q, q) for q in g.states)
    seen = {ident}
    succ: dict = {}
    stack = [ident]
    while stack:
        rel = stack.pop()
        outs = []
        for a in g.labels:
            nxt = _step_right(g, rel, a)
            if nxt:
                outs.append(nxt)
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        succ[rel] = outs
    return _ranges_on_constant_cycles(seen, succ, lambda rel: frozenset(p for (p, _) in rel))


def _ranges_on_constant_cycles(nodes, succ, value):
    """Values v = value(node) realized by an infinite path of constant value."""
    out = set()
    for start in nodes:
        v = value(start)
        if v in out:
            continue
        # cycle search inside the value-preserving subgraph reachable from start
        stack = [(start, iter(succ.get(start, ())))]
        on_path = {start}
        visited = {start}
        found = False
        while stack and not found:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if value(nxt) != v:
                    continue
                if nxt in on_path:
                    found = True
                    break
                if nxt in visited:
                    continue
                visited.add(nxt)
                on_path.add(nxt)
                stack.append((nxt, iter(succ.get(nxt, ()))))
                advanced = True
                break
            if not advanced and not found:
                on_path.discard(node)
                stack.pop()
        if found:
            out.add(v)
    return tuple(sorted(out, key=lambda s: tuple(sorted(map(str, s)))))


@dataclass(frozen=True)
class BlockCode:
    """Sliding 2-block map; words are flat tuples read in symbol chunks."""

    mapping: tuple  # sorted ((chunk, chunk), image-chunk) pairs
    in_chunk: int = 1
    out_chunk: int = 1

    @staticmethod
    def from_dict(d, in_chunk=1, out_chunk=1) -> "BlockCode":
        pairs = tuple(sorted(((tuple(a), tuple(b)), tuple(v)) for (a, b), v in d.items()))
        return BlockCode(pairs, in_chunk, out_chunk)

    def as_dict(self) -> dict:
        return dict(self.mapping)

    def __call__(self, w):
        return apply_block_code(self, w)


def apply_block_code(code: BlockCode, w):
    """Image word, one chunk shorter; empty for words of at most one chunk."""
    w = tuple(w)
    k = code.in_chunk
    if len(w) % k:
        raise SubshiftError("word length is not a whole number of symbols")
    chunks = [w[i : i + k] for i in range(0, len(w), k)]
    if len(chunks) <= 1:
        return ()
    table = code.as_dict()
    out = ()
    for a, b in zip(chunks, chunks[1:]):
        if (a, b) not in table:
            raise SubshiftError(
                f"pair ({'.'.join(a)},{'.'.join(b)}) outside the block-code domain"
            )
        out += table[(a, b)]
    return out
