"""Shared fixture builders: the worked examples everything is tested against."""

from __future__ import annotations

from itertools import product as cartesian

from bisys.core import Alphabet, FormalSum, SymbolicMatrix
from bisys.bisystem import LambdaGraphBisystem, lgs_from_matrix
from bisys.subshift import LabeledGraph, SftMatrix, SubshiftPresentation


def build_bisystem(level_sizes, minus_1b, plus_1b, sigma_minus, sigma_plus):
    """Assemble from 1-based (src, tgt, label) triples as printed in figures."""
    minus = tuple(
        tuple(sorted((s - 1, t - 1, (a,)) for (s, t, a) in blk)) for blk in minus_1b
    )
    plus = tuple(
        tuple(sorted((s - 1, t - 1, (a,)) for (s, t, a) in blk)) for blk in plus_1b
    )
    return LambdaGraphBisystem(
        tuple(level_sizes), minus, plus,
        Alphabet.of(*sigma_minus), Alphabet.of(*sigma_plus),
    )


def golden_mean_pres() -> SubshiftPresentation:
    return SubshiftPresentation.from_sft(SftMatrix(((1, 1), (1, 0)), ("1", "2")))


def even_shift_pres() -> SubshiftPresentation:
    g = LabeledGraph(("1", "2"), (("1", "1", "a"), ("1", "2", "b"), ("2", "1", "b")))
    return SubshiftPresentation.from_graph(g)


def full_shift_pres(n: int) -> SubshiftPresentation:
    symbols = tuple(chr(ord("a") + i) for i in range(n))
    return SubshiftPresentation.from_forbidden(symbols, ())


def alternating_pres() -> SubshiftPresentation:
    g = LabeledGraph(("1", "2"), (("1", "2", "a"), ("2", "1", "b")))
    return SubshiftPresentation.from_graph(g)


def edge_shift_pres() -> SubshiftPresentation:
    """Golden-mean transition graph with distinct edge symbols."""
    g = LabeledGraph(("1", "2"), (("1", "1", "a"), ("1", "2", "b"), ("2", "1", "c")))
    return SubshiftPresentation.from_graph(g)


def full_shift_bisystem(n: int, depth: int) -> LambdaGraphBisystem:
    """Single vertex per level, n upward and n downward loops (worked example)."""
    names = tuple(chr(ord("a") + i) for i in range(n))
    minus = [[(1, 1, s) for s in names]] * depth
    plus = [[(1, 1, s) for s in names]] * depth
    return build_bisystem([1] * (depth + 1), minus, plus, names, names)


def paper_golden_mean_bisystem(depth: int = 5,
                               sm=("am", "bm"), sp=("ap", "bp")) -> LambdaGraphBisystem:
    """The printed golden-mean example, with its two-sided alphabets."""
    a_m, b_m = sm
    a_p, b_p = sp
    minus = [
        [(1, 1, a_m), (2, 1, a_m), (1, 1, b_m)],
        [(1, 1, a_m), (3, 1, a_m), (2, 2, a_m), (4, 2, a_m), (1, 2, b_m), (2, 2, b_m)],
    ] + [
        [(1, 1, a_m), (3, 1, a_m), (2, 2, a_m), (4, 2, a_m), (1, 3, b_m), (2, 4, b_m)]
    ] * (depth - 2)
    plus = [
        [(1, 1, a_p), (1, 2, a_p), (1, 1, b_p)],
        [(1, 1, a_p), (1, 2, a_p), (2, 3, a_p), (2, 4, a_p), (2, 1, b_p), (2, 3, b_p)],
    ] + [
        [(1, 1, a_p), (1, 2, a_p), (3, 3, a_p), (3, 4, a_p), (2, 1, b_p), (4, 3, b_p)]
    ] * (depth - 2)
    sizes = [1, 2] + [4] * (depth - 1)
    return build_bisystem(sizes, minus, plus, set(sm), set(sp))


def paper_even_shift_bisystem(depth: int = 5) -> LambdaGraphBisystem:
    """The printed even-shift example, edge lists exactly as published.

    Kept verbatim as a comparison fixture; it does not pass the structural
    axioms (see the acceptance suite), so only shape-level uses are safe.
    """
    minus = [
        [(1, 1, "am"), (2, 1, "bm")],
        [(1, 1, "am"), (3, 1, "bm"), (2, 2, "bm")],
        [(1, 1, "am"), (2, 2, "am"), (3, 1, "bm"), (4, 2, "bm"), (1, 3, "bm")],
    ] + [
        [(1, 1, "am"), (2, 2, "am"), (3, 1, "bm"), (4, 2, "bm"), (1, 3, "bm"), (2, 4, "bm")]
    ] * (depth - 3)
    plus = [
        [(1, 1, "ap"), (1, 2, "bp")],
        [(1, 1, "ap"), (1, 2, "bp"), (2, 3, "bp")],
        [(1, 1, "ap"), (3, 3, "ap"), (1, 2, "bp"), (2, 1, "bp"), (3, 4, "bp")],
    ] + [
        [(1, 1, "ap"), (3, 3, "ap"), (1, 2, "bp"), (2, 1, "bp"), (3, 4, "bp"), (4, 3, "bp")]
    ] * (depth - 3)
    sizes = [1, 2, 3] + [4] * (depth - 2)
    return build_bisystem(sizes, minus, plus, ("am", "bm"), ("ap", "bp"))


def symbolic_2x2(names=("a", "b", "c", "d")) -> SymbolicMatrix:
    alph = Alphabet.of(*names)
    return SymbolicMatrix.build(
        2, 2, alph, lambda i, j: FormalSum.of(names[2 * i + j])
    )


def golden_mean_symbolic() -> SymbolicMatrix:
    """Edge-symbol matrix of the golden-mean graph (one zero cell)."""
    alph = Alphabet.of("a", "b", "c")
    cells = {(0, 0): "a", (0, 1): "b", (1, 0): "c"}
    return SymbolicMatrix.build(
        2, 2, alph,
        lambda i, j: FormalSum.of(cells[(i, j)]) if (i, j) in cells else FormalSum.zero(),
    )


def golden_mean_lgs(depth: int = 6):
    return lgs_from_matrix([[1, 1], [1, 0]], depth)


def full_n_lgs(n: int, depth: int = 6):
    return lgs_from_matrix([[n]], depth)


def random_irreducible_01(rng, n: int = 3):
    """Seeded irreducible non-permutation 0/1 matrix with unstranded states."""
    while True:
        a = [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)]
        if any(sum(row) == 0 for row in a):
            continue
        if any(sum(a[i][j] for i in range(n)) == 0 for j in range(n)):
            continue
        if all(sum(row) == 1 for row in a):
            continue  # permutation matrices are degenerate for this purpose
        try:
            g = LabeledGraph(
                tuple(str(i + 1) for i in range(n)),
                tuple(
                    (str(i + 1), str(j + 1), f"e{i+1}{j+1}")
                    for i in range(n)
                    for j in range(n)
                    if a[i][j]
                ),
            )
        except Exception:
            continue
        if g.is_irreducible():
            return a


def brute_language(allowed, length, window_ok):
    """All words over ``allowed`` passing a window predicate (filter oracle)."""
    return tuple(
        sorted(w for w in cartesian(allowed, repeat=length) if window_ok(w))
    )


def even_window_ok(w) -> bool:
    """Interior runs of b between two a's must have even length."""
    s = "".join(w)
    parts = s.split("a")
    return all(len(p) % 2 == 0 for p in parts[1:-1])


def golden_window_ok(w) -> bool:
    return "22" not in "".join(w)
