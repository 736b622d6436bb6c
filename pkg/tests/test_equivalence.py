import pytest

from bisys.core import FormalSum, SymbolicMatrix, kappa_matrix, symbolic_matrix_multiply
from bisys.bisystem import presented_words
from bisys.canonical import canonical_smb
from bisys.equivalence import (
    EquivalenceError,
    PsseWitness,
    bipartite_split,
    conjugacy_block_map,
    detect_bipartite,
    psse_to_sse,
    trivial_psse_witness,
    verify_psse_1step,
    verify_sse_1step,
)
from bisys.smb import from_smb
from bisys.subshift import apply_block_code
from fixtures import (
    alternating_pres,
    even_shift_pres,
    full_shift_pres,
    golden_mean_pres,
)


def fixture_systems():
    return {
        "golden": canonical_smb(golden_mean_pres(), 5),
        "even": canonical_smb(even_shift_pres(), 5),
        "full2": canonical_smb(full_shift_pres(2), 5),
    }


def test_trivial_witness_verifies_everywhere():
    for name, s in fixture_systems().items():
        w = trivial_psse_witness(s)
        rep = verify_psse_1step(s, s, w)
        assert rep.ok, (name, rep.failures)


def test_corrupted_witness_fails_at_named_level():
    s = canonical_smb(golden_mean_pres(), 5)
    w = trivial_psse_witness(s)
    bad_x = list(w.x_mats)
    m = bad_x[4]
    grid = [list(row) for row in m.entries]
    grid[0][0] = FormalSum.zero()
    bad_x[4] = SymbolicMatrix(m.rows, m.cols, tuple(tuple(r) for r in grid), m.alphabet)
    broken = PsseWitness(
        w.alphabet_c, w.alphabet_d, w.phi_m, w.phi_n,
        w.p_mats, w.q_mats, tuple(bad_x), w.y_mats,
    )
    rep = verify_psse_1step(s, s, broken)
    assert not rep.ok
    assert any(lvl in (2, 3, 4) for (_, lvl, _) in rep.failures)


def test_detect_bipartite_alternating():
    s = canonical_smb(alternating_pres(), 6)
    bip = detect_bipartite(s)
    assert bip is not None
    assert bip.alphabet_c.symbols == (("a",),)
    assert bip.alphabet_d.symbols == (("b",),)


def test_detect_bipartite_absent_for_golden_mean():
    assert detect_bipartite(canonical_smb(golden_mean_pres(), 5)) is None


def test_detect_bipartite_two_power_alternation():
    from bisys.subshift import LabeledGraph, SubshiftPresentation

    edges = []
    for (s0, t0, lab) in (("1", "1", "1"), ("1", "2", "2"), ("2", "1", "1")):
        edges.append((s0 + "e", t0 + "o", lab + "c"))
        edges.append((s0 + "o", t0 + "e", lab + "d"))
    pres = SubshiftPresentation.from_graph(
        LabeledGraph(("1e", "1o", "2e", "2o"), tuple(edges))
    )
    s = canonical_smb(pres, 6)
    bip = detect_bipartite(s)
    assert bip is not None
    s_cd, s_dc, w = bipartite_split(s, bip)
    assert verify_psse_1step(s_cd, s_dc, w).ok


def test_bipartite_split_alternating_gives_full_one_shifts():
    s = canonical_smb(alternating_pres(), 6)
    s_cd, s_dc, w = bipartite_split(s, detect_bipartite(s))
    for sysm, word in ((s_cd, ("a", "b")), (s_dc, ("b", "a"))):
        assert sysm.level_sizes == (1, 1, 1, 1)
        for m in sysm.minus + sysm.plus:
            assert m.entry(0, 0) == FormalSum.of(word)
    assert verify_psse_1step(s_cd, s_dc, w).ok


def test_split_blocks_satisfy_block_intertwinings():
    s = canonical_smb(alternating_pres(), 6)
    bip = detect_bipartite(s)
    for l in range(1, s.depth - 1, 2):  # odd parent levels
        lhs = symbolic_matrix_multiply(bip.y_blocks[l], bip.p_blocks[l + 1])
        rhs = symbolic_matrix_multiply(bip.p_blocks[l], bip.y_blocks[l + 1])
        assert kappa_matrix(lhs).same_entries(rhs)
        lhs = symbolic_matrix_multiply(bip.x_blocks[l], bip.q_blocks[l + 1])
        rhs = symbolic_matrix_multiply(bip.q_blocks[l], bip.x_blocks[l + 1])
        assert kappa_matrix(lhs).same_entries(rhs)
    for l in range(0, s.depth - 1, 2):  # even parent levels
        lhs = symbolic_matrix_multiply(bip.x_blocks[l], bip.p_blocks[l + 1])
        rhs = symbolic_matrix_multiply(bip.p_blocks[l], bip.x_blocks[l + 1])
        assert kappa_matrix(lhs).same_entries(rhs)
        lhs = symbolic_matrix_multiply(bip.y_blocks[l], bip.q_blocks[l + 1])
        rhs = symbolic_matrix_multiply(bip.q_blocks[l], bip.y_blocks[l + 1])
        assert kappa_matrix(lhs).same_entries(rhs)


def test_psse_to_sse_shapes_and_verification():
    s = canonical_smb(golden_mean_pres(), 5)
    w = trivial_psse_witness(s)
    sw = psse_to_sse(w)
    sizes = s.level_sizes
    for l, h in enumerate(sw.h_mats):
        assert (h.rows, h.cols) == (sizes[l], sizes[l + 1])
    assert verify_sse_1step(s, s, sw).ok

    s_alt = canonical_smb(alternating_pres(), 6)
    s_cd, s_dc, w2 = bipartite_split(s_alt, detect_bipartite(s_alt))
    assert verify_sse_1step(s_cd, s_dc, psse_to_sse(w2)).ok


def test_sse_corrupted_h_fails_with_level():
    s = canonical_smb(golden_mean_pres(), 5)
    sw = psse_to_sse(trivial_psse_witness(s))
    bad_h = list(sw.h_mats)
    m = bad_h[2]
    grid = [list(row) for row in m.entries]
    spots = [
        (i, j) for i in range(m.rows) for j in range(m.cols)
        if not m.entry(i, j).is_zero
    ]
    i0, j0 = spots[0]
    grid[i0][j0] = FormalSum.zero()
    bad_h[2] = SymbolicMatrix(m.rows, m.cols, tuple(tuple(r) for r in grid), m.alphabet)
    from bisys.equivalence import SseWitness

    broken = SseWitness(
        sw.alphabet_c, sw.alphabet_d, sw.phi1, sw.phi2,
        sw.phi_c_plus, sw.phi_d_plus, sw.phi_c_minus, sw.phi_d_minus,
        tuple(bad_h), sw.k_mats,
    )
    rep = verify_sse_1step(s, s, broken)
    assert not rep.ok
    assert any(lvl in (1, 2) for (_, lvl, _) in rep.failures)


def test_block_code_trivial_witness_drops_a_letter():
    s = canonical_smb(golden_mean_pres(), 5)
    w = trivial_psse_witness(s)
    code = conjugacy_block_map(s, s, w)
    b = from_smb(s)
    for n in range(2, 6):
        for word in presented_words(b, "plus", n):
            assert apply_block_code(code, word) == word[1:]


def test_block_code_images_admissible():
    s_alt = canonical_smb(alternating_pres(), 6)
    s_cd, s_dc, w = bipartite_split(s_alt, detect_bipartite(s_alt))
    code = conjugacy_block_map(s_cd, s_dc, w)
    b_cd, b_dc = from_smb(s_cd), from_smb(s_dc)
    for n in range(2, 4):
        langn = presented_words(b_cd, "plus", n)
        target = set(presented_words(b_dc, "plus", n - 1))
        for word in langn:
            assert apply_block_code(code, word) in target


def test_block_code_round_composition_is_shift():
    s_alt = canonical_smb(alternating_pres(), 6)
    s_cd, s_dc, w = bipartite_split(s_alt, detect_bipartite(s_alt))
    fwd = conjugacy_block_map(s_cd, s_dc, w)
    back = conjugacy_block_map(s_cd, s_dc, w, reverse=True)
    b_cd = from_smb(s_cd)
    for word in presented_words(b_cd, "plus", 3):
        image = apply_block_code(fwd, word)
        again = apply_block_code(back, image)
        assert again == word[2:-2]  # one chunk trimmed at each end


def test_block_code_requires_verified_witness():
    s = canonical_smb(golden_mean_pres(), 5)
    w = trivial_psse_witness(s)
    bad_q = list(w.q_mats)
    m = bad_q[1]
    grid = [list(row) for row in m.entries]
    grid[0][0] = FormalSum.zero()
    bad_q[1] = SymbolicMatrix(m.rows, m.cols, tuple(tuple(r) for r in grid), m.alphabet)
    broken = PsseWitness(
        w.alphabet_c, w.alphabet_d, w.phi_m, w.phi_n,
        w.p_mats, tuple(bad_q), w.x_mats, w.y_mats,
    )
    with pytest.raises(EquivalenceError):
        conjugacy_block_map(s, s, broken)


def test_conversion_after_corrupt_then_repair():
    s = canonical_smb(golden_mean_pres(), 5)
    w = trivial_psse_witness(s)
    grid = [list(row) for row in w.y_mats[2].entries]
    original = grid[0][0]
    grid[0][0] = FormalSum.zero()
    damaged = list(w.y_mats)
    damaged[2] = SymbolicMatrix(
        w.y_mats[2].rows, w.y_mats[2].cols, tuple(tuple(r) for r in grid),
        w.y_mats[2].alphabet,
    )
    broken = PsseWitness(
        w.alphabet_c, w.alphabet_d, w.phi_m, w.phi_n,
        w.p_mats, w.q_mats, w.x_mats, tuple(damaged),
    )
    assert not verify_psse_1step(s, s, broken).ok
    grid[0][0] = original
    repaired = list(w.y_mats)
    repaired[2] = SymbolicMatrix(
        w.y_mats[2].rows, w.y_mats[2].cols, tuple(tuple(r) for r in grid),
        w.y_mats[2].alphabet,
    )
    fixed = PsseWitness(
        w.alphabet_c, w.alphabet_d, w.phi_m, w.phi_n,
        w.p_mats, w.q_mats, w.x_mats, tuple(repaired),
    )
    assert verify_psse_1step(s, s, fixed).ok
    assert verify_sse_1step(s, s, psse_to_sse(fixed)).ok
