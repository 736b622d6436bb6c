"""Exact K-group computation via integer level ladders and Smith normal form.

The basis at level l is the set of (vertex, follower word) pairs; the
refinement map iota and the symbol-summed transition map rho both land in the
level-(l+1) coordinates, and the two group towers are the cokernels and
kernels of their difference, carried along by iota.  All arithmetic is exact
over Python integers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bisystem import (
    LambdaGraphBisystem,
    follower_sets,
    predecessor_sets,
    transition_matrices,
)


class KtheoryError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer matrices as lists of lists


def _mat(rows, cols, fill=0):
    return [[fill] * cols for _ in range(rows)]


def _identity(n):
    m = _mat(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != k:
        raise KtheoryError("inner dimensions disagree")
    out = _mat(n, m)
    for i in range(n):
        ai = a[i]
        for t in range(k):
            v = ai[t]
            if v:
                bt = b[t]
                oi = out[i]
                for j in range(m):
                    oi[j] += v * bt[j]
    return out


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_vec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def determinant(a):
    """Fraction-free (Bareiss) determinant of a square integer matrix."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1] if n else 1


def smith_normal_form(a):
    """(U, D, V) with U a V = D, U and V unimodular, D a divisibility chain.

    Pivots are chosen by least absolute value to control entry growth; the
    whole computation stays in exact integers.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    d = [row[:] for row in a]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, c):
        d[dst] = [x + c * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for r in d:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def negate_row(i):
        d[i] = [-x for x in d[i]]
        u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # least-absolute-value pivot in the trailing block
        pivot = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = d[i][j]
                if x and (best is None or abs(x) < best):
                    best = abs(x)
                    pivot = (i, j)
        if pivot is None:
            break
        pi, pj = pivot
        swap_rows(t, pi)
        swap_cols(t, pj)
        # clear the pivot row and column
        dirty = False
        for i in range(t + 1, rows):
            if d[i][t]:
                q = d[i][t] // d[t][t]
                add_row(t, i, -q)
                if d[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if d[t][j]:
                q = d[t][j] // d[t][t]
                add_col(t, j, -q)
                if d[t][j]:
                    dirty = True
        if dirty:
            continue  # remainders left; re-pick a smaller pivot
        # enforce divisibility of the remaining block by the pivot
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if d[i][j] % d[t][t]:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        if d[t][t] < 0:
            negate_row(t)
        t += 1
    return u, d, v


def smith_diagonal(a):
    _, d, _ = smith_normal_form(a)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


@dataclass(frozen=True)
class FgAbelianGroup:
    """Canonical form: free rank plus invariant factors d1 | d2 | ... (> 1)."""

    free_rank: int
    torsion: tuple = ()

    def __post_init__(self):
        for i, x in enumerate(self.torsion):
            if x <= 1:
                raise KtheoryError("invariant factors must exceed 1")
            if i and self.torsion[i] % self.torsion[i - 1]:
                raise KtheoryError("invariant factors must form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


def cokernel(theta, ambient_rank: int | None = None) -> FgAbelianGroup:
    """Z^rows / (column span of theta), in canonical form."""
    rows = len(theta) if theta else (ambient_rank or 0)
    if not theta or not theta[0]:
        return FgAbelianGroup(rows)
    diag = smith_diagonal(theta)
    return FgAbelianGroup(rows - len(diag), tuple(d for d in diag if d > 1))


def kernel_basis(theta):
    """Columns spanning the integer kernel of theta."""
    rows = len(theta)
    cols = len(theta[0]) if rows else 0
    if cols == 0:
        return []
    if rows == 0:
        return [list(col) for col in _identity(cols)]
    _, d, v = smith_normal_form(theta)
    r = len([1 for i in range(min(rows, cols)) if d[i][i]])
    return [[v[i][j] for i in range(cols)] for j in range(r, cols)]


def solve(theta, b):
    """Some integer x with theta x = b, or None."""
    rows = len(theta)
    cols = len(theta[0]) if rows else 0
    u, d, v = smith_normal_form(theta)
    ub = mat_vec(u, b)
    y = [0] * cols
    r = min(rows, cols)
    for i in range(rows):
        di = d[i][i] if i < r else 0
        if di:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
        elif ub[i]:
            return None
    return mat_vec(v, y)


def in_column_span(theta, b) -> bool:
    return solve(theta, b) is not None


def is_unimodular(m) -> bool:
    return len(m) == len(m[0]) and abs(determinant(m)) == 1


# ---------------------------------------------------------------------------
# level ladders


@dataclass(frozen=True)
class LevelLadder:
    side: str
    bases: tuple  # per level: tuple of (vertex index, word)
    iota: tuple   # per block l: d(l+1) x d(l) integer matrix
    rho: tuple    # per block l: d(l+1) x d(l) integer matrix

    @property
    def depth(self) -> int:
        return len(self.bases) - 1

    def theta(self, l: int):
        return mat_sub(self.iota[l], self.rho[l])


def build_ladder(b: LambdaGraphBisystem, side: str = "minus") -> LevelLadder:
    """Refinement and transition matrices on the (vertex, word) bases.

    Minus side: words are follower words, refined by prepending a minus label
    and transported by appending one, weighted by the number of plus labels
    between the vertices.  Plus side symmetric with the roles swapped.
    """
    if side not in ("minus", "plus"):
        raise KtheoryError("side must be 'minus' or 'plus'")
    tm = transition_matrices(b)
    words = follower_sets(b) if side == "minus" else predecessor_sets(b)
    bases = tuple(
        tuple((i, w) for i in range(b.level_sizes[l]) for w in sorted(words[l][i]))
        for l in range(b.depth + 1)
    )
    pos = [
        {key: idx for idx, key in enumerate(level)} for level in bases
    ]

    lam_minus = b.sigma_minus.word_length
    lam_plus = b.sigma_plus.word_length
    iota_mats = []
    rho_mats = []
    for l in range(b.depth):
        dl, dl1 = len(bases[l]), len(bases[l + 1])
        iota_l = _mat(dl1, dl)
        rho_l = _mat(dl1, dl)
        if side == "minus":
            label_len = lam_minus
            for col, (i, xi) in enumerate(bases[l]):
                for (ti, beta, j) in tm.minus[l]:
                    if ti != i:
                        continue
                    key = (j, beta + xi)
                    iota_l[pos[l + 1][key]][col] += 1
                plus_counts: dict = {}
                for (si, alpha, j) in tm.plus[l]:
                    if si == i:
                        plus_counts[j] = plus_counts.get(j, 0) + 1
                for j, count in plus_counts.items():
                    for beta in b.sigma_minus.symbols:
                        key = (j, xi + beta)
                        if key in pos[l + 1]:
                            rho_l[pos[l + 1][key]][col] += count
        else:
            for col, (i, eta) in enumerate(bases[l]):
                for (si, alpha, j) in tm.plus[l]:
                    if si != i:
                        continue
                    key = (j, eta + alpha)
                    iota_l[pos[l + 1][key]][col] += 1
                minus_counts: dict = {}
                for (ti, beta, j) in tm.minus[l]:
                    if ti == i:
                        minus_counts[j] = minus_counts.get(j, 0) + 1
                for j, count in minus_counts.items():
                    for alpha in b.sigma_plus.symbols:
                        key = (j, alpha + eta)
                        if key in pos[l + 1]:
                            rho_l[pos[l + 1][key]][col] += count
        iota_mats.append(iota_l)
        rho_mats.append(rho_l)
    return LevelLadder(side, bases, tuple(iota_mats), tuple(rho_mats))


# ---------------------------------------------------------------------------
# tower computation


@dataclass(frozen=True)
class KResult:
    side: str
    levels: tuple  # per level l: (K0 approximant, K1 approximant)
    stabilized: bool
    stabilization_level: int | None
    intertwining_ok: bool
    connecting_iso: tuple  # per gap: (k0 map is iso, k1 map is iso)

    @property
    def k0(self) -> FgAbelianGroup:
        return self.levels[-1][0]

    @property
    def k1(self) -> FgAbelianGroup:
        return self.levels[-1][1]

    def lines(self):
        out = []
        for l, (g0, g1) in enumerate(self.levels):
            out.append(f"level {l}: K0 ~ {g0}, K1 ~ {g1}")
        if self.stabilized:
            out.append(f"stabilized at level <= {self.stabilization_level}")
        else:
            out.append("not stabilized within the computed depth")
        return out


def _cokernel_map_is_iso(theta_a, theta_b, t):
    """Is the map induced by t an isomorphism of the two presented cokernels?"""
    rows_b = len(theta_b)
    # surjectivity: columns of t and theta_b together span Z^rows_b
    stacked = [trow + brow for trow, brow in zip(t, theta_b)]
    if cokernel(stacked, rows_b).is_trivial is False:
        return False
    # injectivity: t x in im(theta_b) forces x in im(theta_a)
    cols_t = len(t[0]) if t else 0
    cols_b = len(theta_b[0]) if theta_b else 0
    combined = [trow + [-x for x in brow] for trow, brow in zip(t, theta_b)]
    for vec in kernel_basis(combined):
        x = vec[:cols_t]
        if any(x) and not in_column_span(theta_a, x):
            return False
    return True


def _kernel_map_is_iso(theta_a, theta_b, t):
    """Does t restrict to an isomorphism ker(theta_a) -> ker(theta_b)?"""
    ka = kernel_basis(theta_a)
    kb = kernel_basis(theta_b)
    if len(ka) != len(kb):
        return False
    if not ka:
        return True
    # coordinates of t * ka in the kb basis must form a unimodular matrix
    kb_mat = [[kb[j][i] for j in range(len(kb))] for i in range(len(kb[0]))]
    coords = []
    for vec in ka:
        img = mat_vec(t, vec)
        c = solve(kb_mat, img)
        if c is None:
            return False
        coords.append(c)
    m = [[coords[j][i] for j in range(len(coords))] for i in range(len(coords[0]))]
    return is_unimodular(m)


def k_groups(b: LambdaGraphBisystem, side: str = "minus", depth: int | None = None) -> KResult:
    """Level towers for the two groups, with a stabilization verdict.

    Stabilization requires the last three levels to agree in canonical form
    and the connecting maps between them to be isomorphisms on the computed
    presentations; anything less is reported as not stabilized.
    """
    ladder = build_ladder(b, side)
    depth = min(depth if depth is not None else ladder.depth, ladder.depth)
    if depth < 1:
        raise KtheoryError("need depth >= 1")

    inter_ok = True
    for l in range(depth - 1):
        if mat_mul(ladder.iota[l + 1], ladder.rho[l]) != mat_mul(
            ladder.rho[l + 1], ladder.iota[l]
        ):
            inter_ok = False

    levels = []
    thetas = []
    for l in range(depth):
        theta = ladder.theta(l)
        thetas.append(theta)
        g0 = cokernel(theta, len(ladder.bases[l + 1]))
        g1 = FgAbelianGroup(len(kernel_basis(theta)))
        levels.append((g0, g1))

    connecting = []
    for l in range(depth - 1):
        c0 = _cokernel_map_is_iso(thetas[l], thetas[l + 1], ladder.iota[l + 1])
        c1 = _kernel_map_is_iso(thetas[l], thetas[l + 1], ladder.iota[l])
        connecting.append((c0, c1))

    stabilized = False
    stab_level = None
    if depth >= 3:
        for start in range(depth - 3, -1, -1):
            window = levels[start : start + 3]
            maps = connecting[start : start + 2]
            if (
                window[0] == window[1] == window[2]
                and all(c0 and c1 for (c0, c1) in maps)
            ):
                stabilized = True
                stab_level = start
            else:
                break
    return KResult(
        side,
        tuple(levels),
        stabilized and inter_ok,
        stab_level,
        inter_ok,
        tuple(connecting),
    )


def kernel_contains_constant(b: LambdaGraphBisystem, side: str, level: int) -> bool:
    """Does the all-ones vector lie in ker(iota - rho) at the given block?"""
    ladder = build_ladder(b, side)
    theta = ladder.theta(level)
    one = [1] * len(ladder.bases[level])
    return not any(mat_vec(theta, one))


def ck_oracle(a):
    """Cokernel/kernel pair of (I - A^t) for a nonnegative integer matrix.

    Independent cross-check for the minus-side tower of one-sided imports.
    """
    n = len(a)
    m = [[(1 if i == j else 0) - a[j][i] for j in range(n)] for i in range(n)]
    coker = cokernel(m, n)
    ker = FgAbelianGroup(len(kernel_basis(m)))
    return coker, ker
