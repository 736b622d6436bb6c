"""Exact algebra of symbols, formal sums, symbolic matrices and specifications.

Symbols are short strings interned into alphabets.  A symbol of a product
alphabet C.D is represented by the concatenation (as a tuple) of a C-symbol
and a D-symbol, and the alphabet remembers its two factors, so the exchange
map can split every product symbol without guessing.  Formal sums are finite
multisets of such words; multiplicities are kept because the commutation
checks compare products where they matter.
"""

from __future__ import annotations

from dataclasses import dataclass

Word = tuple  # tuple[str, ...]; length 1 for base symbols


class CoreError(ValueError):
    """Malformed algebraic input: bad dimensions, factorisation, duplicates."""


def word_str(w: Word) -> str:
    return ".".join(w) if w else "0"


@dataclass(frozen=True)
class Alphabet:
    """Ordered finite set of symbols, each a word of one fixed length.

    ``factors`` is set for product alphabets C.D and records (C, D); it is
    what makes the exchange of the two factors of a product symbol a checkable
    operation rather than a convention.
    """

    symbols: tuple
    word_length: int = 1
    factors: tuple | None = None

    def __post_init__(self):
        if not self.symbols:
            raise CoreError("alphabet must be non-empty")
        seen = set()
        for s in self.symbols:
            if not isinstance(s, tuple) or len(s) != self.word_length:
                raise CoreError(f"symbol {s!r} does not have word length {self.word_length}")
            if s in seen:
                raise CoreError(f"duplicate symbol {s!r}")
            seen.add(s)

    @staticmethod
    def of(*names: str) -> "Alphabet":
        """Base alphabet from symbol names, in canonical sorted order."""
        return Alphabet(tuple(sorted((n,) for n in names)))

    @staticmethod
    def from_words(words) -> "Alphabet":
        words = tuple(sorted(tuple(w) for w in words))
        if not words:
            raise CoreError("alphabet must be non-empty")
        return Alphabet(words, len(words[0]))

    @staticmethod
    def product(left: "Alphabet", right: "Alphabet") -> "Alphabet":
        syms = tuple(sorted(c + d for c in left.symbols for d in right.symbols))
        return Alphabet(syms, left.word_length + right.word_length, (left, right))

    def __contains__(self, s) -> bool:
        return s in set(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __str__(self):
        return "{" + ",".join(word_str(s) for s in self.symbols) + "}"


class FormalSum:
    """Finite formal sum of words: a multiset.  The empty sum is 0."""

    __slots__ = ("_terms",)

    def __init__(self, terms=()):
        acc: dict = {}
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = ((t, 1) for t in terms)
        for w, c in items:
            w = tuple(w)
            if c < 0:
                raise CoreError("negative multiplicity")
            if c:
                acc[w] = acc.get(w, 0) + c
        object.__setattr__(self, "_terms", acc)

    @staticmethod
    def zero() -> "FormalSum":
        return FormalSum()

    @staticmethod
    def of(*words) -> "FormalSum":
        return FormalSum(tuple(w) if isinstance(w, tuple) else (w,) for w in words)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def items(self):
        """Sorted (word, multiplicity) pairs."""
        return tuple(sorted(self._terms.items()))

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def multiplicity(self, w: Word) -> int:
        return self._terms.get(tuple(w), 0)

    @property
    def term_count(self) -> int:
        return sum(self._terms.values())

    @property
    def has_repeats(self) -> bool:
        return any(c > 1 for c in self._terms.values())

    def __add__(self, other: "FormalSum") -> "FormalSum":
        acc = dict(self._terms)
        for w, c in other._terms.items():
            acc[w] = acc.get(w, 0) + c
        return FormalSum(acc)

    def product(self, other: "FormalSum") -> "FormalSum":
        """Bilinear concatenation product; 0 annihilates."""
        acc: dict = {}
        for u, cu in self._terms.items():
            for v, cv in other._terms.items():
                w = u + v
                acc[w] = acc.get(w, 0) + cu * cv
        return FormalSum(acc)

    def kappa(self, split: int = 1) -> "FormalSum":
        """Exchange the two factors of every term, split after ``split`` letters."""
        acc: dict = {}
        for w, c in self._terms.items():
            if len(w) <= split:
                raise CoreError(f"term {word_str(w)} does not factor at position {split}")
            sw = w[split:] + w[:split]
            acc[sw] = acc.get(sw, 0) + c
        return FormalSum(acc)

    def map_terms(self, fn) -> "FormalSum":
        acc: dict = {}
        for w, c in self._terms.items():
            v = tuple(fn(w))
            acc[v] = acc.get(v, 0) + c
        return FormalSum(acc)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if self.is_zero:
            return "0"
        return "+".join(
            word_str(w) if c == 1 else f"{c}{word_str(w)}" for w, c in self.items()
        )


def formal_sum_product(x: FormalSum, y: FormalSum) -> FormalSum:
    return x.product(y)


def kappa_exchange(x: FormalSum, split: int = 1) -> FormalSum:
    return x.kappa(split)


@dataclass(frozen=True)
class SymbolicMatrix:
    """Rectangular matrix with formal-sum entries over one alphabet."""

    rows: int
    cols: int
    entries: tuple  # tuple[tuple[FormalSum, ...], ...]
    alphabet: Alphabet

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise CoreError("entry grid does not match declared shape")
        allowed = set(self.alphabet.symbols)
        for row in self.entries:
            for cell in row:
                for w in cell.support():
                    if w not in allowed:
                        raise CoreError(f"symbol {word_str(w)} not in matrix alphabet")

    @staticmethod
    def build(rows: int, cols: int, alphabet: Alphabet, fn) -> "SymbolicMatrix":
        grid = tuple(tuple(fn(i, j) for j in range(cols)) for i in range(rows))
        return SymbolicMatrix(rows, cols, grid, alphabet)

    @staticmethod
    def zero(rows: int, cols: int, alphabet: Alphabet) -> "SymbolicMatrix":
        return SymbolicMatrix.build(rows, cols, alphabet, lambda i, j: FormalSum.zero())

    @staticmethod
    def identity_pattern(n: int, symbol, alphabet: Alphabet) -> "SymbolicMatrix":
        """Diagonal matrix whose diagonal entries are the single given symbol."""
        s = tuple(symbol)
        return SymbolicMatrix.build(
            n, n, alphabet, lambda i, j: FormalSum.of(s) if i == j else FormalSum.zero()
        )

    def entry(self, i: int, j: int) -> FormalSum:
        return self.entries[i][j]

    def occurring(self) -> frozenset:
        out = set()
        for row in self.entries:
            for cell in row:
                out |= cell.support()
        return frozenset(out)

    def map_entries(self, fn, alphabet: Alphabet | None = None) -> "SymbolicMatrix":
        return SymbolicMatrix.build(
            self.rows, self.cols, alphabet or self.alphabet, lambda i, j: fn(self.entries[i][j])
        )

    def permute_rows(self, perm) -> "SymbolicMatrix":
        """Row i of the result is row perm[i] of self."""
        grid = tuple(self.entries[perm[i]] for i in range(self.rows))
        return SymbolicMatrix(self.rows, self.cols, grid, self.alphabet)

    def permute_cols(self, perm) -> "SymbolicMatrix":
        grid = tuple(tuple(row[perm[j]] for j in range(self.cols)) for row in self.entries)
        return SymbolicMatrix(self.rows, self.cols, grid, self.alphabet)

    def same_entries(self, other: "SymbolicMatrix") -> bool:
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __str__(self):
        return "\n".join(
            "[" + "  ".join(repr(c) for c in row) + "]" for row in self.entries
        )


def symbolic_matrix_multiply(a: SymbolicMatrix, b: SymbolicMatrix) -> SymbolicMatrix:
    """Matrix product with formal-sum entries over the product alphabet."""
    if a.cols != b.rows:
        raise CoreError(f"inner dimensions disagree: {a.cols} vs {b.rows}")
    alph = Alphabet.product(a.alphabet, b.alphabet)

    def cell(i, j):
        acc = FormalSum.zero()
        for k in range(a.cols):
            acc = acc + a.entries[i][k].product(b.entries[k][j])
        return acc

    return SymbolicMatrix.build(a.rows, b.cols, alph, cell)


def kappa_matrix(m: SymbolicMatrix) -> SymbolicMatrix:
    """Entrywise factor exchange of a matrix over a product alphabet."""
    if m.alphabet.factors is None:
        raise CoreError("matrix alphabet has no recorded product factorisation")
    left, right = m.alphabet.factors
    split = left.word_length
    lset, rset = set(left.symbols), set(right.symbols)
    for w in m.occurring():
        if w[:split] not in lset or w[split:] not in rset:
            raise CoreError(f"term {word_str(w)} not factorable over the product alphabet")
    return m.map_entries(lambda c: c.kappa(split), Alphabet.product(right, left))


@dataclass(frozen=True)
class Specification:
    """Partial injective symbol map between (subsets of) two alphabets.

    Keys and values are whole symbols, i.e. words; for matrices over product
    alphabets the unit of substitution is the full product symbol.
    """

    pairs: tuple  # sorted tuple[(Word, Word), ...]
    source: Alphabet | None = None
    target: Alphabet | None = None

    def __post_init__(self):
        seen_src, seen_dst = set(), set()
        for s, d in self.pairs:
            if s in seen_src:
                raise CoreError(f"specification maps {word_str(s)} twice")
            if d in seen_dst:
                raise CoreError(f"specification is not injective at {word_str(d)}")
            seen_src.add(s)
            seen_dst.add(d)

    @staticmethod
    def from_dict(mapping, source=None, target=None) -> "Specification":
        pairs = tuple(sorted((tuple(k), tuple(v)) for k, v in mapping.items()))
        return Specification(pairs, source, target)

    @staticmethod
    def identity_on(words, alphabet: Alphabet | None = None) -> "Specification":
        return Specification.from_dict({tuple(w): tuple(w) for w in words}, alphabet, alphabet)

    def as_dict(self) -> dict:
        return dict(self.pairs)

    def get(self, w: Word):
        return self.as_dict().get(tuple(w))

    def domain(self) -> frozenset:
        return frozenset(s for s, _ in self.pairs)

    def apply_word(self, w: Word) -> Word:
        d = self.as_dict()
        if tuple(w) not in d:
            raise CoreError(f"specification undefined on {word_str(w)}")
        return d[tuple(w)]

    def apply_sum(self, x: FormalSum) -> FormalSum:
        return x.map_terms(self.apply_word)

    def inverse(self) -> "Specification":
        return Specification(tuple(sorted((d, s) for s, d in self.pairs)), self.target, self.source)

    def then_kappa(self, split: int = 1) -> "Specification":
        """Compose with the factor exchange on the image symbols."""
        return Specification(
            tuple(sorted((s, d[split:] + d[:split]) for s, d in self.pairs)),
            self.source,
            None,
        )

    def __len__(self):
        return len(self.pairs)


def specified_equivalence_failure(a: SymbolicMatrix, b: SymbolicMatrix, spec: Specification):
    """None when a maps onto b entrywise under spec, else a reason string."""
    if (a.rows, a.cols) != (b.rows, b.cols):
        return f"shape mismatch {a.rows}x{a.cols} vs {b.rows}x{b.cols}"
    mapping = spec.as_dict()
    for i in range(a.rows):
        for j in range(a.cols):
            image: dict = {}
            for w, c in a.entries[i][j].items():
                if w not in mapping:
                    return (
                        f"not equivalent under the specification: symbol "
                        f"{word_str(w)} at cell ({i},{j}) is unmapped"
                    )
                v = mapping[w]
                image[v] = image.get(v, 0) + c
            if FormalSum(image) != b.entries[i][j]:
                return f"cell ({i},{j}): {FormalSum(image)!r} != {b.entries[i][j]!r}"
    return None


def specified_equivalent(a: SymbolicMatrix, b: SymbolicMatrix, spec: Specification) -> bool:
    return specified_equivalence_failure(a, b, spec) is None


def find_specification_multi(pairs):
    """One specification phi with A ~phi B for every (A, B) in pairs, or None.

    Constraint propagation on per-cell multiset matching, then deterministic
    backtracking over the remaining choices.
    """
    cells = []
    for a, b in pairs:
        if (a.rows, a.cols) != (b.rows, b.cols):
            return None
        for i in range(a.rows):
            for j in range(a.cols):
                ca, cb = a.entries[i][j], b.entries[i][j]
                if ca.term_count != cb.term_count:
                    return None
                cells.append((ca, cb))

    candidates: dict = {}
    for ca, cb in cells:
        for w, c in ca.items():
            opts = frozenset(v for v, cv in cb.items() if cv == c)
            if w in candidates:
                candidates[w] = candidates[w] & opts
            else:
                candidates[w] = opts
            if not candidates[w]:
                return None

    order = sorted(candidates, key=lambda w: (len(candidates[w]), w))

    def verify(assign) -> bool:
        for ca, cb in cells:
            image: dict = {}
            for w, c in ca.items():
                v = assign[w]
                image[v] = image.get(v, 0) + c
            if FormalSum(image) != cb:
                return False
        return True

    used: set = set()
    assign: dict = {}

    def backtrack(pos: int):
        if pos == len(order):
            return verify(assign)
        w = order[pos]
        for v in sorted(candidates[w]):
            if v in used:
                continue
            assign[w] = v
            used.add(v)
            if backtrack(pos + 1):
                return True
            used.discard(v)
            del assign[w]
        return False

    if not backtrack(0):
        return None
    return Specification.from_dict(dict(assign))


def find_specification(a: SymbolicMatrix, b: SymbolicMatrix):
    """Some specification under which a and b are equivalent, or None."""
    return find_specification_multi([(a, b)])
