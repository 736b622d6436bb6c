"""Two-sided leveled labeled-graph systems, truncated to a finite depth.

A bisystem stores vertex levels 0..L and, per level block l, the upward
(minus) edges V_{l+1} -> V_l and the downward (plus) edges V_l -> V_{l+1}.
Vertex indices are 0-based internally; reports render them 1-based.  Labels
are words (tuples of strings), length 1 unless the alphabet is a product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Alphabet, word_str


class BisystemError(ValueError):
    pass


@dataclass(frozen=True)
class LambdaGraphBisystem:
    level_sizes: tuple  # m(0..L)
    minus_edges: tuple  # per block l: tuple[(src in V_{l+1}, tgt in V_l, label), ...]
    plus_edges: tuple   # per block l: tuple[(src in V_l, tgt in V_{l+1}, label), ...]
    sigma_minus: Alphabet
    sigma_plus: Alphabet

    def __post_init__(self):
        L = self.depth
        if len(self.minus_edges) != L or len(self.plus_edges) != L:
            raise BisystemError("edge blocks must cover every consecutive level pair")
        for l in range(L):
            for (s, t, a) in self.minus_edges[l]:
                if not (0 <= s < self.level_sizes[l + 1] and 0 <= t < self.level_sizes[l]):
                    raise BisystemError(f"minus edge {(s, t, a)} out of range at block {l}")
                if tuple(a) not in self.sigma_minus:
                    raise BisystemError(f"minus label {a} outside the alphabet")
            for (s, t, a) in self.plus_edges[l]:
                if not (0 <= s < self.level_sizes[l] and 0 <= t < self.level_sizes[l + 1]):
                    raise BisystemError(f"plus edge {(s, t, a)} out of range at block {l}")
                if tuple(a) not in self.sigma_plus:
                    raise BisystemError(f"plus label {a} outside the alphabet")

    @property
    def depth(self) -> int:
        return len(self.level_sizes) - 1

    @property
    def is_standard(self) -> bool:
        return self.level_sizes[0] == 1

    @property
    def has_common_alphabet(self) -> bool:
        return self.sigma_minus.symbols == self.sigma_plus.symbols

    def vertex_name(self, level: int, i: int) -> str:
        return f"v{i + 1}^{level}"


@dataclass(frozen=True)
class Verdict:
    ok: bool
    counterexamples: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ValidationReport:
    depth: int
    axioms: tuple  # ((name, Verdict), ...) for i..v
    fpcc: Verdict
    standard: Verdict

    def axiom(self, name: str) -> Verdict:
        return dict(self.axioms)[name]

    @property
    def ok(self) -> bool:
        """Structurally valid to the stored depth (axioms only, not FPCC)."""
        return all(v.ok for _, v in self.axioms)

    def lines(self):
        out = [f"valid to depth {self.depth}: {'yes' if self.ok else 'NO'}"]
        for name, v in self.axioms:
            out.append(f"  axiom ({name}): {'pass' if v.ok else 'FAIL'}")
            for c in v.counterexamples[:5]:
                out.append(f"      {c}")
        out.append(f"  standard (single top vertex): {'yes' if self.standard.ok else 'no'}")
        out.append(f"  FPCC: {'yes' if self.fpcc.ok else 'no'}")
        for c in self.fpcc.counterexamples[:5]:
            out.append(f"      {c}")
        return out


def validate(b: LambdaGraphBisystem) -> ValidationReport:
    """Check the structural axioms to depth L; failures become verdicts."""
    L = b.depth

    # (i)/(ii) finite leveled vertex and edge sets hold by construction
    v_i = Verdict(True)
    v_ii = Verdict(True)

    bad3 = []
    for l in range(L + 1):
        for i in range(b.level_sizes[l]):
            name = b.vertex_name(l, i)
            if l < L and not any(t == i for (_, t, _) in b.minus_edges[l]):
                bad3.append(f"{name} has no incoming minus edge from level {l + 1}")
            if l > 0 and not any(s == i for (s, _, _) in b.minus_edges[l - 1]):
                bad3.append(f"{name} has no outgoing minus edge to level {l - 1}")
            if l < L and not any(s == i for (s, _, _) in b.plus_edges[l]):
                bad3.append(f"{name} has no outgoing plus edge to level {l + 1}")
            if l > 0 and not any(t == i for (_, t, _) in b.plus_edges[l - 1]):
                bad3.append(f"{name} has no incoming plus edge from level {l - 1}")
    v_iii = Verdict(not bad3, tuple(sorted(bad3)))

    bad4 = []
    for l in range(L):
        seen = {}
        for (s, t, a) in b.minus_edges[l]:
            key = (s, tuple(a))
            if key in seen and seen[key] != t:
                bad4.append(
                    f"minus not right-resolving: two {word_str(tuple(a))}-edges "
                    f"from {b.vertex_name(l + 1, s)}"
                )
            elif key in seen:
                bad4.append(f"duplicate minus edge from {b.vertex_name(l + 1, s)}")
            seen[key] = t
        seen = {}
        for (s, t, a) in b.plus_edges[l]:
            key = (t, tuple(a))
            if key in seen and seen[key] != s:
                bad4.append(
                    f"plus not left-resolving: two {word_str(tuple(a))}-edges "
                    f"into {b.vertex_name(l + 1, t)}"
                )
            elif key in seen:
                bad4.append(f"duplicate plus edge into {b.vertex_name(l + 1, t)}")
            seen[key] = s
    v_iv = Verdict(not bad4, tuple(sorted(bad4)))

    bad5 = []
    for l in range(L - 1):
        for u in range(b.level_sizes[l]):
            for v in range(b.level_sizes[l + 2]):
                down = sorted(
                    (tuple(bm), tuple(ap))
                    for (sm, tm, bm) in b.minus_edges[l]
                    if tm == u
                    for (sp, tp, ap) in b.plus_edges[l + 1]
                    if sp == sm and tp == v
                )
                up = sorted(
                    (tuple(bm), tuple(ap))
                    for (sp, tp, ap) in b.plus_edges[l]
                    if sp == u
                    for (sm, tm, bm) in b.minus_edges[l + 1]
                    if sm == v and tm == tp
                )
                if down != up:
                    bad5.append(
                        f"local property fails at ({b.vertex_name(l, u)},"
                        f"{b.vertex_name(l + 2, v)}): "
                        f"{[f'{word_str(x)}|{word_str(y)}' for x, y in down]} vs "
                        f"{[f'{word_str(x)}|{word_str(y)}' for x, y in up]}"
                    )
    v_v = Verdict(not bad5, tuple(sorted(bad5)))

    fpcc = _fpcc_verdict(b)
    standard = Verdict(b.is_standard, () if b.is_standard else ("|V_0| != 1",))
    return ValidationReport(
        depth=L,
        axioms=(("i", v_i), ("ii", v_ii), ("iii", v_iii), ("iv", v_iv), ("v", v_v)),
        fpcc=fpcc,
        standard=standard,
    )


def follower_sets(b: LambdaGraphBisystem):
    """Per level, per vertex: all downward minus label words to level 0.

    The word reads the topmost edge first; labels are flattened into one
    tuple of letters.
    """
    L = b.depth
    sets = [[frozenset([()]) for _ in range(b.level_sizes[0])]]
    for l in range(L):
        nxt = []
        for j in range(b.level_sizes[l + 1]):
            acc = set()
            for (s, t, a) in b.minus_edges[l]:
                if s == j:
                    for w in sets[l][t]:
                        acc.add(tuple(a) + w)
            nxt.append(frozenset(acc))
        sets.append(nxt)
    return tuple(tuple(level) for level in sets)


def predecessor_sets(b: LambdaGraphBisystem):
    """Per level, per vertex: all upward plus label words from level 0."""
    L = b.depth
    sets = [[frozenset([()]) for _ in range(b.level_sizes[0])]]
    for l in range(L):
        nxt = []
        for j in range(b.level_sizes[l + 1]):
            acc = set()
            for (s, t, a) in b.plus_edges[l]:
                if t == j:
                    for w in sets[l][s]:
                        acc.add(w + tuple(a))
            nxt.append(frozenset(acc))
        sets.append(nxt)
    return tuple(tuple(level) for level in sets)


def follower_set(b: LambdaGraphBisystem, level: int, i: int) -> frozenset:
    return follower_sets(b)[level][i]


def predecessor_set(b: LambdaGraphBisystem, level: int, i: int) -> frozenset:
    return predecessor_sets(b)[level][i]


def _fpcc_verdict(b: LambdaGraphBisystem) -> Verdict:
    if not b.is_standard:
        return Verdict(False, ("not standard: |V_0| != 1",))
    if not b.has_common_alphabet:
        return Verdict(False, ("alphabets differ between the two sides",))
    F = follower_sets(b)
    P = predecessor_sets(b)
    bad = []
    for l in range(1, b.depth + 1):
        for i in range(b.level_sizes[l]):
            if F[l][i] != P[l][i]:
                bad.append(
                    f"{b.vertex_name(l, i)}: follower words "
                    f"{sorted(map(word_str, F[l][i]))} != predecessor words "
                    f"{sorted(map(word_str, P[l][i]))}"
                )
    return Verdict(not bad, tuple(bad))


def fpcc_check(b: LambdaGraphBisystem) -> bool:
    return _fpcc_verdict(b).ok


def presented_words(b: LambdaGraphBisystem, side: str, n: int):
    """Length-n label words on consecutive paths anywhere in the truncation."""
    if n < 0:
        raise BisystemError("length must be >= 0")
    if n == 0:
        return ((),)
    if n > b.depth:
        raise BisystemError(f"length {n} exceeds depth {b.depth}")
    out = set()
    if side == "minus":
        # walk downward from every start level m >= n
        for m in range(n, b.depth + 1):
            frontier = {(i, ()) for i in range(b.level_sizes[m])}
            for l in range(m, m - n, -1):
                nxt = set()
                for (s, t, a) in b.minus_edges[l - 1]:
                    for (i, w) in frontier:
                        if i == s:
                            nxt.add((t, w + tuple(a)))
                frontier = nxt
            out |= {w for (_, w) in frontier}
    elif side == "plus":
        for m in range(0, b.depth - n + 1):
            frontier = {(i, ()) for i in range(b.level_sizes[m])}
            for l in range(m, m + n):
                nxt = set()
                for (s, t, a) in b.plus_edges[l]:
                    for (i, w) in frontier:
                        if i == s:
                            nxt.add((t, w + tuple(a)))
                frontier = nxt
            out |= {w for (_, w) in frontier}
    else:
        raise BisystemError("side must be 'minus' or 'plus'")
    return tuple(sorted(out))


def transpose(b: LambdaGraphBisystem) -> LambdaGraphBisystem:
    """Reverse every edge and swap the two sides."""
    new_minus = tuple(
        tuple(sorted((t, s, a) for (s, t, a) in block)) for block in b.plus_edges
    )
    new_plus = tuple(
        tuple(sorted((t, s, a) for (s, t, a) in block)) for block in b.minus_edges
    )
    return LambdaGraphBisystem(
        b.level_sizes, new_minus, new_plus, b.sigma_plus, b.sigma_minus
    )


# ---------------------------------------------------------------------------
# transition matrices and generator index sets


@dataclass(frozen=True)
class TransitionMatrixBisystem:
    """0/1 tensors per level block, stored as sets of (i, label, j) triples."""

    minus: tuple  # per block l: frozenset[(i at l, label, j at l+1)]
    plus: tuple

    def a_minus(self, l: int, i: int, label, j: int) -> int:
        return 1 if (i, tuple(label), j) in self.minus[l] else 0

    def a_plus(self, l: int, i: int, label, j: int) -> int:
        return 1 if (i, tuple(label), j) in self.plus[l] else 0


def transition_matrices(b: LambdaGraphBisystem) -> TransitionMatrixBisystem:
    minus = tuple(
        frozenset((t, tuple(a), s) for (s, t, a) in block) for block in b.minus_edges
    )
    plus = tuple(
        frozenset((s, tuple(a), t) for (s, t, a) in block) for block in b.plus_edges
    )
    return TransitionMatrixBisystem(minus, plus)


def bisystem_from_transition_matrices(
    tm: TransitionMatrixBisystem, level_sizes, sigma_minus, sigma_plus
) -> LambdaGraphBisystem:
    """Rebuild the edge lists; resolving properties make this a round trip."""
    minus = tuple(
        tuple(sorted((j, i, a) for (i, a, j) in block)) for block in tm.minus
    )
    plus = tuple(
        tuple(sorted((i, j, a) for (i, a, j) in block)) for block in tm.plus
    )
    return LambdaGraphBisystem(tuple(level_sizes), minus, plus, sigma_minus, sigma_plus)


def sigma1_minus(b: LambdaGraphBisystem, level: int, i: int) -> frozenset:
    """Labels of minus edges leaving the vertex downward (level >= 1)."""
    if level < 1:
        raise BisystemError("defined for levels >= 1")
    return frozenset(tuple(a) for (s, _, a) in b.minus_edges[level - 1] if s == i)


def sigma1_plus(b: LambdaGraphBisystem, level: int, i: int) -> frozenset:
    """Labels of plus edges arriving at the vertex from below (level >= 1)."""
    if level < 1:
        raise BisystemError("defined for levels >= 1")
    return frozenset(tuple(a) for (_, t, a) in b.plus_edges[level - 1] if t == i)


# ---------------------------------------------------------------------------
# import from one-sided leveled systems


@dataclass(frozen=True)
class LambdaGraphSystem:
    """One-sided leveled labeled graph with a level-collapsing map iota."""

    level_sizes: tuple
    edges: tuple  # per block l: tuple[(src in V_l, tgt in V_{l+1}, label str), ...]
    iota: tuple   # per block l: tuple mapping V_{l+1} index -> V_l index
    alphabet: Alphabet

    @property
    def depth(self) -> int:
        return len(self.level_sizes) - 1


def validate_lambda_graph_system(lgs: LambdaGraphSystem):
    """List of defects; empty when the one-sided axioms hold to depth."""
    bad = []
    L = lgs.depth
    for l in range(L):
        m, m1 = lgs.level_sizes[l], lgs.level_sizes[l + 1]
        if len(lgs.iota[l]) != m1:
            bad.append(f"iota block {l} has wrong length")
            continue
        if any(not (0 <= v < m) for v in lgs.iota[l]):
            bad.append(f"iota block {l} leaves the level")
        if set(lgs.iota[l]) != set(range(m)):
            bad.append(f"iota block {l} is not surjective")
        for (s, t, a) in lgs.edges[l]:
            if not (0 <= s < m and 0 <= t < m1):
                bad.append(f"edge {(s, t, a)} out of range at block {l}")
            if (a,) not in lgs.alphabet:
                bad.append(f"label {a} outside the alphabet")
        seen = set()
        for (s, t, a) in lgs.edges[l]:
            if (t, a) in seen:
                bad.append(f"not left-resolving: two {a}-edges into vertex {t+1} at level {l+1}")
            seen.add((t, a))
        outs = {s for (s, _, _) in lgs.edges[l]}
        for i in range(m):
            if i not in outs:
                bad.append(f"vertex {i+1} at level {l} has no successor")
        ins = {t for (_, t, _) in lgs.edges[l]}
        for j in range(m1):
            if j not in ins:
                bad.append(f"vertex {j+1} at level {l+1} has no predecessor")
    # local property: labels into v from iota-collapsed sources match labels
    # into iota(v) level-wise, as multisets
    for l in range(L - 1):
        for u in range(lgs.level_sizes[l]):
            for v in range(lgs.level_sizes[l + 2]):
                upper = sorted(
                    a
                    for (s, t, a) in lgs.edges[l + 1]
                    if t == v and lgs.iota[l][s] == u
                )
                lower = sorted(
                    a
                    for (s, t, a) in lgs.edges[l]
                    if s == u and t == lgs.iota[l + 1][v]
                )
                if upper != lower:
                    bad.append(
                        f"one-sided local property fails at (v{u+1}^{l}, v{v+1}^{l+2}): "
                        f"{upper} vs {lower}"
                    )
    return bad


IOTA_SYMBOL = "iota"


def from_lambda_graph_system(lgs: LambdaGraphSystem) -> LambdaGraphBisystem:
    """Two-sided system: plus side is the graph, minus side one iota edge per
    collapse; rejects inputs that fail the one-sided axioms."""
    defects = validate_lambda_graph_system(lgs)
    if defects:
        raise BisystemError("not a lambda-graph system: " + "; ".join(defects[:3]))
    minus = tuple(
        tuple((j, lgs.iota[l][j], (IOTA_SYMBOL,)) for j in range(lgs.level_sizes[l + 1]))
        for l in range(lgs.depth)
    )
    plus = tuple(
        tuple(sorted((s, t, (a,)) for (s, t, a) in lgs.edges[l])) for l in range(lgs.depth)
    )
    b = LambdaGraphBisystem(
        lgs.level_sizes,
        minus,
        plus,
        Alphabet.of(IOTA_SYMBOL),
        Alphabet.from_words((a,) for a in sorted({a for bl in lgs.edges for (_, _, a) in bl})),
    )
    rep = validate(b)
    if not rep.ok:
        raise BisystemError("import produced an invalid bisystem: " + "; ".join(
            c for _, v in rep.axioms for c in v.counterexamples[:2]
        ))
    return b


def lgs_from_graph(graph_edges, n_states: int, depth: int) -> LambdaGraphSystem:
    """Constant-level system of a finite labeled graph, iota the identity.

    ``graph_edges`` are (src, tgt, label) with 0-based states; labels must make
    the graph left-resolving.
    """
    edges = tuple(tuple(sorted(graph_edges)) for _ in range(depth))
    iota = tuple(tuple(range(n_states)) for _ in range(depth))
    labels = sorted({a for (_, _, a) in graph_edges})
    return LambdaGraphSystem(
        tuple([n_states] * (depth + 1)), edges, iota, Alphabet.of(*labels)
    )


def lgs_from_matrix(matrix, depth: int, labels=None) -> LambdaGraphSystem:
    """Finite-graph system from a nonnegative integer adjacency matrix.

    Entry (i, j) = k spawns k parallel edges with distinct labels, named
    a{i+1}{j+1} (suffixed when k > 1), so the labeling is left-resolving.
    """
    n = len(matrix)
    edges = []
    for i in range(n):
        for j in range(n):
            k = matrix[i][j]
            for r in range(k):
                name = f"a{i+1}{j+1}" + (f"_{r+1}" if k > 1 else "")
                if labels is not None:
                    name = labels[(i, j, r)]
                edges.append((i, j, name))
    return lgs_from_graph(tuple(edges), n, depth)


# ---------------------------------------------------------------------------
# finite-depth shift-distinctness witness search


@dataclass(frozen=True)
class SigmaIResult:
    """Three-valued outcome of the finite-depth distinctness search."""

    status: str  # "witness" | "absent" | "inconclusive"
    level: int
    bound: int
    assignments: tuple = ()  # ((vertex, follower word, alpha word, tail word), ...)

    @property
    def found(self) -> bool:
        return self.status == "witness"


def _column(b, top_level, top_vertex, labels):
    """Downward minus path from the top vertex with the given labels, or None."""
    path = [top_vertex]
    lvl = top_level
    v = top_vertex
    for a in labels:
        step = None
        for (s, t, lab) in b.minus_edges[lvl - 1]:
            if s == v and tuple(lab) == tuple(a):
                step = t
                break
        if step is None:
            return None
        v = step
        path.append(v)
        lvl -= 1
    return tuple(path)


def sigma_condition_I_witness(b: LambdaGraphBisystem, level: int, bound: int,
                              max_candidates: int = 4096) -> SigmaIResult:
    """Search for cylinder refinements certifying shift-distinctness.

    For each (vertex at the level, follower word) the search picks a window
    of horizontal width 2*bound: a forward symbol word, the added bottom
    labels, and the column of vertices after each step.  Windows are simulated
    column by column through the plus edges; two window points are certified
    distinct under n shifts when their visible symbol words or their columns
    (vertices or labels) disagree.  Outcomes are three-valued: a witness,
    absent at this depth (exhaustive failure over the window class), or
    inconclusive when the level is out of range or the candidate cap cut the
    enumeration short.
    """
    if not (1 <= bound <= level):
        raise BisystemError("need 1 <= bound <= level")
    if level > b.depth:
        return SigmaIResult("inconclusive", level, bound)
    width = 2 * bound

    F = follower_sets(b)
    lam = b.sigma_minus.word_length
    items = []
    for i in range(b.level_sizes[level]):
        for xi in sorted(F[level][i]):
            items.append((i, xi))

    plus_ok = {
        l: {(s, t, tuple(a)) for (s, t, a) in b.plus_edges[l]} for l in range(b.depth)
    }

    def label_chunks(w):
        return [w[p : p + lam] for p in range(0, len(w), lam)]

    capped = False

    def candidates(i, xi):
        """Deterministic stream of windows for one (vertex, word) item."""
        nonlocal capped
        base_labels = label_chunks(xi)
        col0 = (_column(b, level, i, base_labels), tuple(base_labels))
        out = []

        def extend(cols, alphas, bottoms):
            nonlocal capped
            if len(alphas) == width:
                out.append((tuple(alphas), tuple(bottoms), tuple(cols)))
                if len(out) >= max_candidates:
                    capped = True
                    return True
                return False
            prev_path, prev_labels = cols[-1]
            want = list(prev_labels[1:])  # shift down: drop the top label
            for alpha in b.sigma_plus.symbols:
                for bot in b.sigma_minus.symbols:
                    labs = want + [bot]
                    for top in range(b.level_sizes[level]):
                        path = _column(b, level, top, labs)
                        if path is None:
                            continue
                        ok = True
                        for j in range(level):
                            # plus edge: prev column level j -> new column level j+1
                            if (prev_path[level - j], path[level - (j + 1)], alpha) \
                                    not in plus_ok[j]:
                                ok = False
                                break
                        if not ok:
                            continue
                        if extend(cols + [(path, tuple(labs))], alphas + [alpha],
                                  bottoms + [bot]):
                            return True
            return False

        extend([col0], [], [])
        return out

    cand = {}
    for it in items:
        cs = candidates(*it)
        if not cs:
            return SigmaIResult("inconclusive" if capped else "absent", level, bound)
        cand[it] = cs

    def distinct(win_x, win_y, n):
        """Certify shift^n of the x-window differs from the y-window."""
        ax, _, cx = win_x
        ay, _, cy = win_y
        for p in range(width - n):
            if ax[n + p] != ay[p]:
                return True
        for p in range(width - n + 1):
            if cx[n + p] != cy[p]:
                return True
        return False

    chosen = {}

    def assign(pos):
        if pos == len(items):
            return True
        it = items[pos]
        for win in cand[it]:
            ok = True
            for other, owin in list(chosen.items()) + [(it, win)]:
                for n in range(1, bound + 1):
                    if not distinct(win, owin, n) or (
                        other != it and not distinct(owin, win, n)
                    ):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                chosen[it] = win
                if assign(pos + 1):
                    return True
                del chosen[it]
        return False

    if assign(0):
        rows = tuple(
            (
                b.vertex_name(level, i),
                xi,
                tuple(a for a in chosen[(i, xi)][0]),
                tuple(t for t in chosen[(i, xi)][1]),
            )
            for (i, xi) in items
        )
        return SigmaIResult("witness", level, bound, rows)
    return SigmaIResult("inconclusive" if capped else "absent", level, bound)
