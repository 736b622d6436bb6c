"""Matrix presentations of bisystems and their validation/isomorphism calculus.

The block M^-_{l,l+1} is m(l) x m(l+1) but encodes edges from level l+1 down
to level l: entry (i, j) sums the labels of minus edges into v_i^l from
v_j^{l+1}.  That orientation is what makes the commutation identity of the
two one-step products literally well-typed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Alphabet,
    FormalSum,
    Specification,
    SymbolicMatrix,
    find_specification_multi,
    kappa_matrix,
    symbolic_matrix_multiply,
    word_str,
)
from .bisystem import LambdaGraphBisystem, Verdict, validate


class SmbError(ValueError):
    pass


@dataclass(frozen=True)
class SymbolicMatrixBisystem:
    minus: tuple  # per block l: SymbolicMatrix m(l) x m(l+1) over sigma_minus
    plus: tuple
    sigma_minus: Alphabet
    sigma_plus: Alphabet
    repeat_from: int | None = None  # block index whose matrices repeat from there on

    def __post_init__(self):
        if len(self.minus) != len(self.plus) or not self.minus:
            raise SmbError("need matching nonempty block sequences")
        for l, (mm, mp) in enumerate(zip(self.minus, self.plus)):
            if (mm.rows, mm.cols) != (mp.rows, mp.cols):
                raise SmbError(f"block {l}: minus and plus shapes differ")
            if l and self.minus[l - 1].cols != mm.rows:
                raise SmbError(f"block {l}: shape chain broken")

    @property
    def depth(self) -> int:
        return len(self.minus)

    @property
    def level_sizes(self) -> tuple:
        return tuple([self.minus[0].rows] + [m.cols for m in self.minus])

    @property
    def is_standard(self) -> bool:
        return self.minus[0].rows == 1

    def shift(self, k: int) -> "SymbolicMatrixBisystem":
        """Drop the first k blocks (compare eventually-constant ranges)."""
        if not (0 <= k < self.depth):
            raise SmbError("bad shift")
        return SymbolicMatrixBisystem(
            self.minus[k:], self.plus[k:], self.sigma_minus, self.sigma_plus
        )

    def extended(self, depth: int) -> "SymbolicMatrixBisystem":
        """Expand an eventually-constant tail out to the requested depth."""
        if depth <= self.depth:
            return self
        if self.repeat_from is None:
            raise SmbError("no repeat marker; cannot extend")
        last_m, last_p = self.minus[-1], self.plus[-1]
        if last_m.rows != last_m.cols:
            raise SmbError("repeating block must be square")
        minus = list(self.minus)
        plus = list(self.plus)
        while len(minus) < depth:
            minus.append(last_m)
            plus.append(last_p)
        return SymbolicMatrixBisystem(
            tuple(minus), tuple(plus), self.sigma_minus, self.sigma_plus, self.repeat_from
        )


@dataclass(frozen=True)
class SmbValidationReport:
    depth: int
    axioms: tuple  # ((name, Verdict), ...)

    def axiom(self, name: str) -> Verdict:
        return dict(self.axioms)[name]

    @property
    def ok(self) -> bool:
        return all(v.ok for _, v in self.axioms)

    def lines(self):
        out = [f"valid to depth {self.depth}: {'yes' if self.ok else 'NO'}"]
        for name, v in self.axioms:
            out.append(f"  axiom ({name}): {'pass' if v.ok else 'FAIL'}")
            for c in v.counterexamples[:5]:
                out.append(f"      {c}")
        return out


def validate_smb(s: SymbolicMatrixBisystem) -> SmbValidationReport:
    """Shape, support, per-cell and per-column symbol discipline, commutation."""
    v_i = Verdict(True)  # shapes checked on construction

    bad2 = []
    for l in range(s.depth):
        for mat, name in ((s.minus[l], "minus"), (s.plus[l], "plus")):
            for i in range(mat.rows):
                if all(mat.entry(i, j).is_zero for j in range(mat.cols)):
                    bad2.append(f"block {l} {name}: zero row {i + 1}")
            for j in range(mat.cols):
                if all(mat.entry(i, j).is_zero for i in range(mat.rows)):
                    bad2.append(f"block {l} {name}: zero column {j + 1}")
    v_ii = Verdict(not bad2, tuple(bad2))

    bad3 = []
    for l in range(s.depth):
        for mat, name in ((s.minus[l], "minus"), (s.plus[l], "plus")):
            for i in range(mat.rows):
                for j in range(mat.cols):
                    if mat.entry(i, j).has_repeats:
                        bad3.append(f"block {l} {name} cell ({i+1},{j+1}): repeated symbol")
    v_iii = Verdict(not bad3, tuple(bad3))

    bad4 = []
    for l in range(s.depth):
        for mat, name in ((s.minus[l], "minus"), (s.plus[l], "plus")):
            for j in range(mat.cols):
                seen: dict = {}
                for i in range(mat.rows):
                    for w in mat.entry(i, j).support():
                        if w in seen and seen[w] != i:
                            bad4.append(
                                f"block {l} {name} column {j+1}: symbol "
                                f"{word_str(w)} in rows {seen[w]+1} and {i+1}"
                            )
                        seen[w] = i
    v_iv = Verdict(not bad4, tuple(bad4))

    bad5 = []
    for l in range(s.depth - 1):
        lhs = symbolic_matrix_multiply(s.minus[l], s.plus[l + 1])
        rhs = kappa_matrix(symbolic_matrix_multiply(s.plus[l], s.minus[l + 1]))
        for i in range(lhs.rows):
            for j in range(lhs.cols):
                if lhs.entry(i, j) != rhs.entry(i, j):
                    bad5.append(
                        f"commutation fails at blocks {l},{l+1} cell ({i+1},{j+1}): "
                        f"{lhs.entry(i, j)!r} vs {rhs.entry(i, j)!r}"
                    )
    v_v = Verdict(not bad5, tuple(bad5))

    return SmbValidationReport(
        depth=s.depth,
        axioms=(("i", v_i), ("ii", v_ii), ("iii", v_iii), ("iv", v_iv), ("v", v_v)),
    )


def to_smb(b: LambdaGraphBisystem, unchecked: bool = False) -> SymbolicMatrixBisystem:
    """Matrix presentation of a validated bisystem.

    ``unchecked`` skips the validation gate so that defective inputs can be
    presented and judged on the matrix side instead.
    """
    if not unchecked and not validate(b).ok:
        raise SmbError("bisystem fails validation; refusing to present")
    minus = []
    plus = []
    for l in range(b.depth):
        rows, cols = b.level_sizes[l], b.level_sizes[l + 1]

        def mcell(i, j, block=l):
            return FormalSum.of(
                *[tuple(a) for (src, tgt, a) in b.minus_edges[block] if src == j and tgt == i]
            )

        def pcell(i, j, block=l):
            return FormalSum.of(
                *[tuple(a) for (src, tgt, a) in b.plus_edges[block] if src == i and tgt == j]
            )

        minus.append(SymbolicMatrix.build(rows, cols, b.sigma_minus, mcell))
        plus.append(SymbolicMatrix.build(rows, cols, b.sigma_plus, pcell))
    return SymbolicMatrixBisystem(tuple(minus), tuple(plus), b.sigma_minus, b.sigma_plus)


def from_smb(s: SymbolicMatrixBisystem) -> LambdaGraphBisystem:
    """Edge lists from a validated matrix presentation (inverse of to_smb)."""
    rep = validate_smb(s)
    if not rep.ok:
        raise SmbError("matrix bisystem fails validation; refusing to expand")
    minus = []
    plus = []
    for l in range(s.depth):
        mm, mp = s.minus[l], s.plus[l]
        mblock = []
        pblock = []
        for i in range(mm.rows):
            for j in range(mm.cols):
                for w, c in mm.entry(i, j).items():
                    mblock.extend([(j, i, w)] * c)
                for w, c in mp.entry(i, j).items():
                    pblock.extend([(i, j, w)] * c)
        minus.append(tuple(sorted(mblock)))
        plus.append(tuple(sorted(pblock)))
    return LambdaGraphBisystem(
        s.level_sizes, tuple(minus), tuple(plus), s.sigma_minus, s.sigma_plus
    )


def sft_smb(a: SymbolicMatrix, identify: bool = False, depth: int = 3) -> SymbolicMatrixBisystem:
    """Standard matrix bisystem of a square symbolic matrix.

    Level 0 is the row vector of cell symbols restricted to the nonzero cells;
    from level 2 on the blocks are the constant square matrices built from the
    signed copies of the cell symbols.  With ``identify`` the two sides share
    one unsigned alphabet.
    """
    n = a.rows
    if a.rows != a.cols:
        raise SmbError("matrix must be square")
    cells: dict = {}
    for i in range(n):
        for j in range(n):
            e = a.entry(i, j)
            if e.is_zero:
                continue
            if e.term_count != 1:
                raise SmbError("each nonzero cell must hold exactly one symbol")
            (w, _), = e.items()
            if w in cells.values():
                raise SmbError("cell symbols must be pairwise distinct")
            cells[(i, j)] = w
    if depth < 2:
        raise SmbError("depth must be >= 2")

    def tagged(w, sign):
        return w if identify else (w[0] + sign,) + w[1:]

    sigma_minus = Alphabet.from_words(sorted(tagged(w, "-") for w in cells.values()))
    sigma_plus = Alphabet.from_words(sorted(tagged(w, "+") for w in cells.values()))

    live = sorted(cells)  # level-1 index pairs, row-major
    full = [(i, p) for i in range(n) for p in range(n)]  # levels >= 2

    def minus_cell(ri, rp, cj, cq):
        # entry ((i,p),(j,q)) = sign-minus copy of a(j, i) when p == q
        if rp == cq and (cj, ri) in cells:
            return FormalSum.of(tagged(cells[(cj, ri)], "-"))
        return FormalSum.zero()

    def plus_cell(ri, rp, cj, cq):
        # entry ((i,p),(j,q)) = sign-plus copy of a(p, q) when i == j
        if ri == cj and (rp, cq) in cells:
            return FormalSum.of(tagged(cells[(rp, cq)], "+"))
        return FormalSum.zero()

    m01 = SymbolicMatrix.build(
        1, len(live), sigma_minus, lambda _, j: FormalSum.of(tagged(cells[live[j]], "-"))
    )
    p01 = SymbolicMatrix.build(
        1, len(live), sigma_plus, lambda _, j: FormalSum.of(tagged(cells[live[j]], "+"))
    )
    m12 = SymbolicMatrix.build(
        len(live), n * n, sigma_minus,
        lambda r, c: minus_cell(*live[r], *full[c]),
    )
    p12 = SymbolicMatrix.build(
        len(live), n * n, sigma_plus,
        lambda r, c: plus_cell(*live[r], *full[c]),
    )
    mtail = SymbolicMatrix.build(
        n * n, n * n, sigma_minus, lambda r, c: minus_cell(*full[r], *full[c])
    )
    ptail = SymbolicMatrix.build(
        n * n, n * n, sigma_plus, lambda r, c: plus_cell(*full[r], *full[c])
    )
    minus = [m01, m12] + [mtail] * (depth - 2)
    plus = [p01, p12] + [ptail] * (depth - 2)
    return SymbolicMatrixBisystem(
        tuple(minus), tuple(plus), sigma_minus, sigma_plus, repeat_from=2
    )


def rename_symbols(
    s: SymbolicMatrixBisystem, spec_minus: Specification, spec_plus: Specification
) -> SymbolicMatrixBisystem:
    """Apply symbol bijections to the two sides (total on occurring symbols)."""
    new_minus_alpha = Alphabet.from_words(
        sorted({spec_minus.apply_word(w) for w in s.sigma_minus.symbols})
    )
    new_plus_alpha = Alphabet.from_words(
        sorted({spec_plus.apply_word(w) for w in s.sigma_plus.symbols})
    )
    minus = tuple(m.map_entries(spec_minus.apply_sum, new_minus_alpha) for m in s.minus)
    plus = tuple(m.map_entries(spec_plus.apply_sum, new_plus_alpha) for m in s.plus)
    return SymbolicMatrixBisystem(minus, plus, new_minus_alpha, new_plus_alpha, s.repeat_from)


@dataclass(frozen=True)
class SmbIsomorphism:
    """Level-wise vertex permutations plus one symbol bijection per side.

    ``perms[l][i]`` is the s1-vertex presented at slot i of s2's level l.
    """

    perms: tuple
    spec_minus: Specification
    spec_plus: Specification


def smb_isomorphic(s1: SymbolicMatrixBisystem, s2: SymbolicMatrixBisystem):
    """Witnessing permutations and specifications, or None.

    Backtracks over level-wise bijections constrained by entry term-count
    signatures; the symbol bijections are then inferred jointly across all
    permuted blocks and verified.
    """
    if s1.level_sizes != s2.level_sizes:
        return None
    L = s1.depth
    sizes = s1.level_sizes

    def level_signatures(s):
        sigs = []
        for l in range(L + 1):
            mat_in = s.minus[l - 1] if l else None
            mat_out = s.minus[l] if l < L else None
            pin = s.plus[l - 1] if l else None
            pout = s.plus[l] if l < L else None
            level = []
            for i in range(sizes[l]):
                sig = []
                for m, by_row in (
                    (mat_in, False),
                    (mat_out, True),
                    (pin, False),
                    (pout, True),
                ):
                    if m is None:
                        sig.append(())
                        continue
                    cells = (
                        [m.entry(i, j) for j in range(m.cols)]
                        if by_row
                        else [m.entry(r, i) for r in range(m.rows)]
                    )
                    sig.append(tuple(sorted(c.term_count for c in cells)))
                level.append(tuple(sig))
            sigs.append(level)
        return sigs

    sig1 = level_signatures(s1)
    sig2 = level_signatures(s2)
    for l in range(L + 1):
        if sorted(sig1[l]) != sorted(sig2[l]):
            return None

    perms: list = [None] * (L + 1)

    def permuted_pairs():
        """Matrix pairs (permuted s1 block, s2 block) for the current perms."""
        pairs = []
        for l in range(L):
            pi, pj = perms[l], perms[l + 1]
            for side in ("minus", "plus"):
                m1 = getattr(s1, side)[l].permute_rows(pi).permute_cols(pj)
                pairs.append((m1, getattr(s2, side)[l]))
        return pairs

    def cellwise_ok(l):
        """Term-count check of all blocks touching already-permuted levels."""
        for bl in range(L):
            if perms[bl] is None or perms[bl + 1] is None:
                continue
            for side in ("minus", "plus"):
                a = getattr(s1, side)[bl]
                b = getattr(s2, side)[bl]
                for i in range(a.rows):
                    for j in range(a.cols):
                        if (
                            a.entry(perms[bl][i], perms[bl + 1][j]).term_count
                            != b.entry(i, j).term_count
                        ):
                            return False
        return True

    joint = (
        s1.sigma_minus.symbols == s1.sigma_plus.symbols
        and s2.sigma_minus.symbols == s2.sigma_plus.symbols
    )

    def assign(l):
        if l == L + 1:
            pairs = permuted_pairs()
            mpairs = [p for idx, p in enumerate(pairs) if idx % 2 == 0]
            ppairs = [p for idx, p in enumerate(pairs) if idx % 2 == 1]
            if joint:
                # one symbol bijection must serve both sides
                spec = find_specification_multi(mpairs + ppairs)
                if spec is None:
                    return None
                return SmbIsomorphism(tuple(tuple(p) for p in perms), spec, spec)
            spec_m = find_specification_multi(mpairs)
            if spec_m is None:
                return None
            spec_p = find_specification_multi(ppairs)
            if spec_p is None:
                return None
            return SmbIsomorphism(tuple(tuple(p) for p in perms), spec_m, spec_p)

        n = sizes[l]
        slots = list(range(n))

        def fill(pos, used, current):
            if pos == n:
                perms[l] = list(current)
                if cellwise_ok(l):
                    result = assign(l + 1)
                    if result is not None:
                        return result
                perms[l] = None
                return None
            for cand in range(n):
                if cand in used:
                    continue
                if sig1[l][cand] != sig2[l][pos]:
                    continue
                result = fill(pos + 1, used | {cand}, current + [cand])
                if result is not None:
                    return result
            return None

        return fill(0, set(), [])

    return assign(0)


def bisystem_isomorphic(b1: LambdaGraphBisystem, b2: LambdaGraphBisystem):
    """Isomorphism decided on the matrix presentations."""
    return smb_isomorphic(to_smb(b1), to_smb(b2))
