"""Canonical two-sided presentation of a sofic subshift.

Vertices at level l are the distinct sets of length-l fill-in words over all
(left ray, right ray) splices of the shift, computed exactly through a chosen
labeled-graph presentation: a ray contributes its stabilized state set, and a
class is keyed by the fill-in word set itself, since distinct ray pairs can
share one.  Edges append one letter to a ray; by the well-definedness of that
step the result is independent of the representative pair, which the builder
spot-checks on up to three pairs per edge test and treats any disagreement as
a hard internal error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Alphabet
from .bisystem import LambdaGraphBisystem, validate, fpcc_check
from .smb import SymbolicMatrixBisystem, to_smb
from .subshift import (
    LabeledGraph,
    SubshiftPresentation,
    fill_in_words,
    realizable_future_sets,
    realizable_past_sets,
    step_future,
    step_past,
)


class CanonicalError(ValueError):
    pass


@dataclass(frozen=True)
class CentralClass:
    level: int
    words: tuple  # sorted fill-in words of length == level
    pairs: tuple  # realizing (past set, future set) pairs, sorted, diagnostic

    @property
    def key(self):
        return self.words


@dataclass(frozen=True)
class CanonicalBuild:
    bisystem: LambdaGraphBisystem
    class_table: tuple  # per level: tuple[CentralClass, ...]
    presentation: SubshiftPresentation
    irreducible: bool
    warnings: tuple = ()


def _pair_table(g: LabeledGraph, level: int):
    """Map fill-in word set -> realizing (past, future) pairs at this gap."""
    pasts = realizable_past_sets(g)
    futures = realizable_future_sets(g)
    table: dict = {}
    for p in pasts:
        for f in futures:
            words = fill_in_words(g, p, f, level)
            if words:
                table.setdefault(words, []).append((p, f))
    return table


def central_classes(pres: SubshiftPresentation, level: int):
    """Distinct classes at one level, sorted by their word sets."""
    if level < 0:
        raise CanonicalError("level must be >= 0")
    g = pres.graph
    if level == 0:
        return (
            CentralClass(
                0,
                ((),),
                tuple(
                    sorted(
                        (tuple(sorted(p)), tuple(sorted(f)))
                        for p in realizable_past_sets(g)
                        for f in realizable_future_sets(g)
                        if set(p) & set(f)
                    )
                ),
            ),
        )
    table = _pair_table(g, level)
    out = []
    for words in sorted(table, key=lambda ws: (len(ws), ws)):
        pairs = tuple(
            sorted((tuple(sorted(p)), tuple(sorted(f))) for (p, f) in table[words])
        )
        out.append(CentralClass(level, words, pairs))
    return tuple(out)


def canonical_bisystem(pres: SubshiftPresentation, depth: int) -> CanonicalBuild:
    """Build vertices and the two edge families to the requested depth."""
    if depth < 1:
        raise CanonicalError("depth must be >= 1")
    g = pres.graph
    labels = g.labels
    classes = [central_classes(pres, l) for l in range(depth + 1)]
    index = [
        {c.key: i for i, c in enumerate(level_classes)} for level_classes in classes
    ]

    warnings = []
    irreducible = g.is_irreducible()
    if not irreducible:
        warnings.append(
            "presentation is reducible; splice enumeration may be coarser than "
            "the pointwise definition"
        )

    def sample_pairs(cls: CentralClass):
        return cls.pairs[:3]

    minus_blocks = []
    plus_blocks = []
    for l in range(depth):
        mblock = []
        pblock = []
        for j, cls in enumerate(classes[l + 1]):
            for a in labels:
                # appending ``a`` at the right end of the left ray
                results = set()
                for (p, f) in sample_pairs(cls):
                    p2 = step_past(g, frozenset(p), a)
                    words = fill_in_words(g, p2, frozenset(f), l) if p2 else ()
                    results.add(words)
                if len(results) > 1:
                    raise CanonicalError(
                        f"edge test disagrees between representatives of class "
                        f"{cls.words} at level {l + 1}, symbol {a}"
                    )
                words = results.pop()
                if words:
                    if words not in index[l]:
                        raise CanonicalError(
                            f"left step left the class table at level {l}: {words}"
                        )
                    mblock.append((j, index[l][words], (a,)))
                # prepending ``a`` at the start of the right ray
                results = set()
                for (p, f) in sample_pairs(cls):
                    f2 = step_future(g, a, frozenset(f))
                    words = fill_in_words(g, frozenset(p), f2, l) if f2 else ()
                    results.add(words)
                if len(results) > 1:
                    raise CanonicalError(
                        f"edge test disagrees between representatives of class "
                        f"{cls.words} at level {l + 1}, symbol {a}"
                    )
                words = results.pop()
                if words:
                    if words not in index[l]:
                        raise CanonicalError(
                            f"right step left the class table at level {l}: {words}"
                        )
                    pblock.append((index[l][words], j, (a,)))
        minus_blocks.append(tuple(sorted(mblock)))
        plus_blocks.append(tuple(sorted(pblock)))

    alphabet = Alphabet.of(*labels)
    b = LambdaGraphBisystem(
        tuple(len(c) for c in classes),
        tuple(minus_blocks),
        tuple(plus_blocks),
        alphabet,
        alphabet,
    )
    rep = validate(b)
    if not rep.ok:
        raise CanonicalError(
            "canonical build failed validation: "
            + "; ".join(c for _, v in rep.axioms for c in v.counterexamples[:2])
        )
    if not fpcc_check(b):
        raise CanonicalError("canonical build does not satisfy FPCC")
    return CanonicalBuild(b, tuple(classes), pres, irreducible, tuple(warnings))


def canonical_smb(pres: SubshiftPresentation, depth: int) -> SymbolicMatrixBisystem:
    return to_smb(canonical_bisystem(pres, depth).bisystem)
