import random
from itertools import product as cartesian

import pytest

from bisys.bisystem import (
    BisystemError,
    LambdaGraphBisystem,
    fpcc_check,
    follower_set,
    follower_sets,
    from_lambda_graph_system,
    predecessor_sets,
    presented_words,
    sigma1_minus,
    sigma_condition_I_witness,
    bisystem_from_transition_matrices,
    transition_matrices,
    transpose,
    validate,
    validate_lambda_graph_system,
)
from bisys.canonical import canonical_bisystem
from bisys.smb import to_smb, validate_smb
from fixtures import (
    alternating_pres,
    full_shift_bisystem,
    full_shift_pres,
    golden_mean_lgs,
    golden_mean_pres,
    paper_golden_mean_bisystem,
)


def drop_edge(b, side, block, idx):
    blocks = list(getattr(b, side + "_edges"))
    blk = list(blocks[block])
    del blk[idx]
    blocks[block] = tuple(blk)
    kw = {side + "_edges": tuple(blocks)}
    other = "plus" if side == "minus" else "minus"
    kw[other + "_edges"] = getattr(b, other + "_edges")
    return LambdaGraphBisystem(
        b.level_sizes, kw["minus_edges"], kw["plus_edges"], b.sigma_minus, b.sigma_plus
    )


def test_validate_full_shift():
    for n in (2, 3):
        rep = validate(full_shift_bisystem(n, 5))
        assert rep.ok and rep.fpcc.ok


def test_validate_paper_golden_mean():
    rep = validate(paper_golden_mean_bisystem(5))
    assert rep.ok
    # common-alphabet version satisfies the follower/predecessor condition
    common = paper_golden_mean_bisystem(5, sm=("a", "b"), sp=("a", "b"))
    assert fpcc_check(common)


def test_validate_mutation_breaks_local_property():
    b = paper_golden_mean_bisystem(5)
    # remove the beta-plus edge v_2^1 -> v_1^2 (v_2^1 keeps other out-edges)
    block = list(b.plus_edges[1])
    victim = block.index((1, 0, ("bp",)))
    mutated = drop_edge(b, "plus", 1, victim)
    rep = validate(mutated)
    assert not rep.ok
    assert not rep.axiom("v").ok
    assert any("local property fails" in c for c in rep.axiom("v").counterexamples)


def enumerate_followers(b, level, i):
    """Path-enumeration oracle for the level-DP computation."""
    if level == 0:
        return {()}
    out = set()
    for (s, t, a) in b.minus_edges[level - 1]:
        if s == i:
            out |= {tuple(a) + w for w in enumerate_followers(b, level - 1, t)}
    return out


def test_follower_sets_match_enumeration_oracle():
    b = paper_golden_mean_bisystem(5)
    F = follower_sets(b)
    for l in range(b.depth + 1):
        for i in range(b.level_sizes[l]):
            assert F[l][i] == frozenset(enumerate_followers(b, l, i))


def test_full_shift_follower_set_is_everything():
    b = full_shift_bisystem(2, 5)
    assert follower_set(b, 3, 0) == frozenset(cartesian(("a", "b"), repeat=3))


def test_golden_mean_beta_edge_family_into_v3():
    # the beta-minus edge v_1^{l+1} -> v_3^l injects beta-prefixed words of
    # F(v_3^l) into F(v_1^{l+1}); v_3^l itself only continues downward by alpha
    b = paper_golden_mean_bisystem(5)
    for l in range(2, 5):
        f3 = follower_set(b, l, 2)  # v_3^l
        f1_up = follower_set(b, l + 1, 0) if l + 1 <= b.depth else None
        assert all(w[0] == "am" for w in f3)
        if f1_up is not None:
            assert {("bm",) + w for w in f3} <= f1_up


def test_fpcc_examples():
    assert fpcc_check(full_shift_bisystem(2, 5))
    assert fpcc_check(canonical_bisystem(golden_mean_pres(), 5).bisystem)
    imported = from_lambda_graph_system(golden_mean_lgs(4))
    assert not fpcc_check(imported)


def test_presented_words():
    gm = canonical_bisystem(golden_mean_pres(), 5).bisystem
    assert presented_words(gm, "plus", 2) == (
        ("1", "1"), ("1", "2"), ("2", "1"),
    )
    for n in range(1, 5):
        assert presented_words(gm, "minus", n) == presented_words(gm, "plus", n)
    full = full_shift_bisystem(3, 4)
    assert len(presented_words(full, "plus", 3)) == 27
    b = paper_golden_mean_bisystem(5)
    assert presented_words(b, "plus", 2) == (
        ("ap", "ap"), ("ap", "bp"), ("bp", "ap"),
    )


def test_transpose_involution_and_swap():
    b = paper_golden_mean_bisystem(5)
    t = transpose(b)
    assert validate(t).ok
    tt = transpose(t)
    norm = LambdaGraphBisystem(
        b.level_sizes,
        tuple(tuple(sorted(x)) for x in b.minus_edges),
        tuple(tuple(sorted(x)) for x in b.plus_edges),
        b.sigma_minus,
        b.sigma_plus,
    )
    assert tt == norm
    # follower words of the transpose are reversed predecessor words
    P = predecessor_sets(b)
    Ft = follower_sets(t)
    for l in range(b.depth + 1):
        for i in range(b.level_sizes[l]):
            assert Ft[l][i] == frozenset(tuple(reversed(w)) for w in P[l][i])
    # transpose of an FPCC system: status recomputed, not assumed
    common = paper_golden_mean_bisystem(5, sm=("a", "b"), sp=("a", "b"))
    assert isinstance(fpcc_check(transpose(common)), bool)


def test_lgs_import():
    lgs = golden_mean_lgs(4)
    b = from_lambda_graph_system(lgs)
    rep = validate(b)
    assert rep.ok
    # one iota edge per upper vertex
    tm = transition_matrices(b)
    for block in tm.minus:
        sources = [j for (_, _, j) in block]
        assert sorted(sources) == list(range(len(sources)))
    for l in range(1, b.depth + 1):
        for i in range(b.level_sizes[l]):
            assert sigma1_minus(b, l, i) == frozenset({("iota",)})
    a_plus = tm.plus[1]
    assert (0, ("a11",), 0) in a_plus and (0, ("a12",), 1) in a_plus
    assert (1, ("a21",), 0) in a_plus


def test_lgs_rejects_broken_local_property():
    lgs = golden_mean_lgs(4)
    bad_iota = list(lgs.iota)
    bad_iota[2] = (1, 1)  # not surjective
    from bisys.bisystem import LambdaGraphSystem

    broken = LambdaGraphSystem(lgs.level_sizes, lgs.edges, tuple(bad_iota), lgs.alphabet)
    assert validate_lambda_graph_system(broken)
    with pytest.raises(BisystemError):
        from_lambda_graph_system(broken)


def test_tensor_round_trip():
    b = canonical_bisystem(golden_mean_pres(), 4).bisystem
    tm = transition_matrices(b)
    back = bisystem_from_transition_matrices(
        tm, b.level_sizes, b.sigma_minus, b.sigma_plus
    )
    norm = LambdaGraphBisystem(
        b.level_sizes,
        tuple(tuple(sorted(x)) for x in b.minus_edges),
        tuple(tuple(sorted(x)) for x in b.plus_edges),
        b.sigma_minus,
        b.sigma_plus,
    )
    assert back == norm


def test_sigma_condition_witness():
    full2 = canonical_bisystem(full_shift_pres(2), 6).bisystem
    assert sigma_condition_I_witness(full2, 2, 2).found

    full1 = canonical_bisystem(full_shift_pres(1), 6).bisystem
    assert sigma_condition_I_witness(full1, 2, 2).status == "absent"

    gm = canonical_bisystem(golden_mean_pres(), 6).bisystem
    assert sigma_condition_I_witness(gm, 3, 2).found

    assert sigma_condition_I_witness(gm, 7, 2).status == "inconclusive"
    with pytest.raises(BisystemError):
        sigma_condition_I_witness(gm, 2, 3)


def random_single_edge_mutations(b, rng, count):
    """Mutations that keep the edge grid well-typed: move one endpoint."""
    out = []
    for _ in range(count):
        side = rng.choice(("minus", "plus"))
        blocks = [list(map(list, blk)) for blk in getattr(b, side + "_edges")]
        l = rng.randrange(len(blocks))
        if not blocks[l]:
            continue
        k = rng.randrange(len(blocks[l]))
        which = rng.choice((0, 1))
        hi = b.level_sizes[l + 1] if (side == "minus") == (which == 0) else b.level_sizes[l]
        blocks[l][k][which] = rng.randrange(hi)
        fixed = tuple(tuple((s, t, tuple(a)) for (s, t, a) in blk) for blk in blocks)
        kwargs = dict(
            level_sizes=b.level_sizes,
            minus_edges=b.minus_edges,
            plus_edges=b.plus_edges,
            sigma_minus=b.sigma_minus,
            sigma_plus=b.sigma_plus,
        )
        kwargs[side + "_edges"] = fixed
        try:
            out.append(LambdaGraphBisystem(**kwargs))
        except BisystemError:
            continue
    return out


def test_validate_agrees_with_matrix_validation():
    rng = random.Random(11)
    fixtures = [
        paper_golden_mean_bisystem(4),
        full_shift_bisystem(2, 4),
        canonical_bisystem(alternating_pres(), 4).bisystem,
    ]
    cases = list(fixtures)
    for f in fixtures:
        cases.extend(random_single_edge_mutations(f, rng, 14))
    assert len(cases) >= 20
    for b in cases:
        assert validate(b).ok == validate_smb(to_smb(b, unchecked=True)).ok


def test_transition_tensor_entries_match_fixture_edges():
    b = paper_golden_mean_bisystem(5)
    tm = transition_matrices(b)
    # level 2 -> 3 block of the printed example
    want = {
        (0, ("am",), 0), (0, ("am",), 2),
        (1, ("am",), 1), (1, ("am",), 3),
        (2, ("bm",), 0), (3, ("bm",), 1),
    }
    assert tm.minus[2] == frozenset(want)
    assert tm.a_minus(2, 0, ("am",), 0) == 1
    assert tm.a_minus(2, 2, ("bm",), 0) == 1
    assert tm.a_minus(2, 0, ("bm",), 0) == 0
