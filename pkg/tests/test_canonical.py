from itertools import product as cartesian

import pytest

from bisys.bisystem import fpcc_check, presented_words, validate
from bisys.canonical import (
    CanonicalError,
    canonical_bisystem,
    canonical_smb,
    central_classes,
)
from bisys.smb import smb_isomorphic, to_smb
from bisys.subshift import (
    LabeledGraph,
    SubshiftPresentation,
    admissible_words,
    fill_in_words,
    step_future,
    step_past,
)
from fixtures import (
    even_shift_pres,
    even_window_ok,
    full_shift_bisystem,
    full_shift_pres,
    golden_mean_pres,
    golden_window_ok,
    paper_golden_mean_bisystem,
)


def window_oracle_classes(allowed, window_ok, gap, pad=9):
    """Distinct fill-in word sets over long finite contexts (filter oracle)."""
    classes = set()
    for u in cartesian(allowed, repeat=pad):
        if not window_ok(u):
            continue
        for v in cartesian(allowed, repeat=pad):
            if not window_ok(v):
                continue
            words = frozenset(
                m for m in cartesian(allowed, repeat=gap) if window_ok(u + m + v)
            )
            if words:
                classes.add(words)
    return classes


def test_full_shift_single_class():
    for l in range(0, 5):
        assert len(central_classes(full_shift_pres(2), l)) == 1


def test_golden_mean_class_counts():
    assert len(central_classes(golden_mean_pres(), 1)) == 2
    for l in (2, 3, 4):
        assert len(central_classes(golden_mean_pres(), l)) == 4


def test_golden_mean_classes_match_window_oracle():
    for gap in (1, 2, 3):
        got = {frozenset(c.words) for c in central_classes(golden_mean_pres(), gap)}
        want = window_oracle_classes("12", golden_window_ok, gap)
        assert got == want


def test_even_shift_classes_match_window_oracle():
    for gap in (1, 2, 3):
        got = {frozenset(c.words) for c in central_classes(even_shift_pres(), gap)}
        want = window_oracle_classes("ab", even_window_ok, gap)
        assert got == want


def test_canonical_golden_mean_matches_printed_example():
    build = canonical_bisystem(golden_mean_pres(), 5)
    assert build.bisystem.level_sizes == (1, 2, 4, 4, 4, 4)
    iso = smb_isomorphic(to_smb(build.bisystem), to_smb(paper_golden_mean_bisystem(5)))
    assert iso is not None


def test_canonical_full_shift_structure():
    build = canonical_bisystem(full_shift_pres(3), 4)
    b = build.bisystem
    assert b.level_sizes == (1, 1, 1, 1, 1)
    for block in b.minus_edges:
        assert len(block) == 3
    for block in b.plus_edges:
        assert len(block) == 3
    assert smb_isomorphic(to_smb(b), to_smb(full_shift_bisystem(3, 4))) is not None


def test_every_build_is_valid_and_compatible():
    for pres in (golden_mean_pres(), even_shift_pres(), full_shift_pres(2)):
        build = canonical_bisystem(pres, 5)
        rep = validate(build.bisystem)
        assert rep.ok
        assert fpcc_check(build.bisystem)


def test_presented_language_equals_admissible():
    for pres in (golden_mean_pres(), even_shift_pres(), full_shift_pres(2)):
        b = canonical_bisystem(pres, 5).bisystem
        for n in range(1, 5):
            ws = admissible_words(pres, n)
            assert presented_words(b, "minus", n) == ws
            assert presented_words(b, "plus", n) == ws


def test_edge_wellformedness_across_all_pairs():
    """The left/right step gives one answer per class, over every pair."""
    pres = golden_mean_pres()
    g = pres.graph
    for l in (1, 2, 3):
        for cls in central_classes(pres, l + 1):
            for a in g.labels:
                left = {
                    fill_in_words(g, step_past(g, frozenset(p), a), frozenset(f), l)
                    for (p, f) in cls.pairs
                }
                right = {
                    fill_in_words(g, frozenset(p), step_future(g, a, frozenset(f)), l)
                    for (p, f) in cls.pairs
                }
                assert len(left) == 1 and len(right) == 1


def test_reducible_presentation_is_flagged():
    g = LabeledGraph(
        ("p", "q"), (("p", "p", "x"), ("q", "q", "y"))
    )
    build = canonical_bisystem(SubshiftPresentation.from_graph(g), 3)
    assert not build.irreducible
    assert build.warnings
    assert validate(build.bisystem).ok


def test_class_table_and_vertex_order_agree():
    build = canonical_bisystem(golden_mean_pres(), 4)
    for l, classes in enumerate(build.class_table):
        assert len(classes) == build.bisystem.level_sizes[l]
        assert list(classes) == sorted(classes, key=lambda c: (len(c.words), c.words))


def test_depth_validation():
    with pytest.raises(CanonicalError):
        canonical_bisystem(golden_mean_pres(), 0)
    with pytest.raises(CanonicalError):
        central_classes(golden_mean_pres(), -1)


def test_canonical_smb_is_validated_presentation():
    s = canonical_smb(even_shift_pres(), 4)
    assert s.level_sizes == (1, 3, 9, 9, 9)


def test_canonical_of_recoded_forbidden_input():
    pres = SubshiftPresentation.from_forbidden(("1", "2"), (("1", "2", "1"),))
    build = canonical_bisystem(pres, 4)
    b = build.bisystem
    assert validate(b).ok and fpcc_check(b)
    for n in range(1, 4):
        assert presented_words(b, "plus", n) == admissible_words(pres, n)
