"""Word algebra for coefficient groups and free products G * F(x).

Everything here is purely syntactic except where a coefficient-group
triviality test is required; those operations accept an oracle object
(see `relasph.coset.GroupContext`) and never guess: if the oracle cannot
decide a query within its budget, an `UndecidedError` is raised.

Words over a coefficient group are stored as freely reduced syllable
tuples ``((gen, exp), ...)``.  Elements of the free product are stored as
`FreeProductWord` values whose syllables alternate between coefficient
words and x-generator powers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional


class TriState(Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    def __bool__(self):  # pragma: no cover - guard against accidental truthiness
        raise TypeError("TriState is not a boolean; compare explicitly")


class UndecidedError(Exception):
    """A word-problem query exceeded the oracle budget."""


@dataclass(frozen=True)
class OrderResult:
    """Outcome of an order computation.

    ``finite`` results are exact.  ``unknown`` means the enumeration budget
    was exhausted: the order may be infinite or just out of reach, never a
    guess.  ``infinite`` is only produced by backends that can prove it
    (free-product normal forms), never by coset enumeration.
    """

    kind: str  # 'finite' | 'infinite' | 'unknown'
    value: int = 0
    cap: int = 0

    @staticmethod
    def finite(n: int) -> "OrderResult":
        return OrderResult("finite", value=n)

    @staticmethod
    def exceeds(cap: int) -> "OrderResult":
        return OrderResult("unknown", cap=cap)

    @staticmethod
    def infinite() -> "OrderResult":
        return OrderResult("infinite")

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    @property
    def is_infinite(self) -> bool:
        return self.kind == "infinite"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"

    def __str__(self):
        if self.kind == "finite":
            return f"Finite({self.value})"
        if self.kind == "infinite":
            return "Infinite"
        return f"ExceedsBudget({self.cap})"


# ---------------------------------------------------------------------------
# coefficient-group words
# ---------------------------------------------------------------------------

# a coefficient-group element is a freely reduced word over the group's
# generators: tuple[tuple[str, int], ...]
Word = tuple
GroupElement = Word


def free_reduce(syllables: Iterable[tuple]) -> Word:
    out = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            merged = out[-1][1] + exp
            out.pop()
            if merged:
                out.append((gen, merged))
        else:
            out.append((gen, exp))
    return tuple(out)


def wmul(*words: Word) -> Word:
    merged = []
    for w in words:
        merged.extend(w)
    return free_reduce(merged)


def winv(w: Word) -> Word:
    return tuple((gen, -exp) for gen, exp in reversed(w))


def wpow(w: Word, n: int) -> Word:
    if n < 0:
        return wpow(winv(w), -n)
    out: Word = ()
    for _ in range(n):
        out = wmul(out, w)
    return out


def word_str(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(g if e == 1 else f"{g}^{e}" for g, e in w)


# ---------------------------------------------------------------------------
# coefficient groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoefficientGroup:
    """A finitely presented coefficient group.

    `kind` is ``("cyclic", n)`` for presentations <g | g^n> and
    ``("general",)`` otherwise.  Relators are stored freely and cyclically
    reduced (reduction here is syntactic; it does not use group identities).
    """

    generators: tuple
    relators: tuple
    kind: tuple = field(init=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        rels = tuple(cyclic_word_reduce(free_reduce(r)) for r in self.relators)
        rels = tuple(r for r in rels if r)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "relators", rels)
        kind = ("general",)
        if len(gens) == 1 and len(rels) == 1:
            (g, e), = rels[0] if len(rels[0]) == 1 else ((None, 0),)
            if g == gens[0] and abs(e) >= 1:
                kind = ("cyclic", abs(e))
        object.__setattr__(self, "kind", kind)

    def free_factors(self) -> Optional[dict]:
        """Map generator -> modulus when this group is visibly a free
        product of cyclic groups (modulus None for an infinite factor),
        or None when the relators do not have that shape."""
        moduli = {g: None for g in self.generators}
        for rel in self.relators:
            gens_in = {g for g, _ in rel}
            if len(gens_in) != 1:
                return None
            if len(rel) != 1:
                return None
            g, e = rel[0]
            m = moduli[g]
            moduli[g] = abs(e) if m is None else gcd(m, abs(e))
        return moduli

    def is_torsion_free(self) -> TriState:
        factors = self.free_factors()
        if factors is not None:
            if all(m is None or m == 1 for m in factors.values()):
                return TriState.YES
            return TriState.NO
        return TriState.UNKNOWN


def cyclic_word_reduce(w: Word) -> Word:
    """Cyclically reduce a freely reduced one-group word."""
    w = free_reduce(w)
    while len(w) >= 2 and w[0][0] == w[-1][0]:
        merged = (w[0][0], w[0][1] + w[-1][1])
        body = w[1:-1]
        w = free_reduce(((merged,) if merged[1] else ()) + body)
    return w


def cyclic(n: int, gen: str = "g") -> CoefficientGroup:
    if n < 1:
        raise ValueError("cyclic order must be >= 1")
    return CoefficientGroup((gen,), (((gen, n),),))


def free_group(*gens: str) -> CoefficientGroup:
    return CoefficientGroup(tuple(gens), ())


# ---------------------------------------------------------------------------
# free product words
# ---------------------------------------------------------------------------

X = "x"  # syllable tags
C = "c"


@dataclass(frozen=True)
class FreeProductWord:
    """A word in G * F(x): syllables are ('x', letter, exp) or ('c', word).

    Raw parser output may violate alternation; `reduce` and
    `cyclically_reduce` normalise it.
    """

    syllables: tuple

    def __str__(self):
        parts = []
        for s in self.syllables:
            if s[0] == X:
                parts.append(s[1] if s[2] == 1 else f"{s[1]}^{s[2]}")
            else:
                parts.append(word_str(s[1]))
        return " ".join(parts) if parts else "1"

    def is_identity_syntactic(self) -> bool:
        return not self.syllables


def xsyl(letter: str, exp: int) -> tuple:
    return (X, letter, exp)


def csyl(word: Word) -> tuple:
    return (C, free_reduce(word))


def fpw(*syllables) -> FreeProductWord:
    return FreeProductWord(tuple(syllables))


def fpw_invert(w: FreeProductWord) -> FreeProductWord:
    out = []
    for s in reversed(w.syllables):
        if s[0] == X:
            out.append((X, s[1], -s[2]))
        else:
            out.append((C, winv(s[1])))
    return FreeProductWord(tuple(out))


class _SyntacticOracle:
    """Fallback triviality test with free-group semantics: a coefficient
    word is trivial exactly when it is empty.  Used when no coefficient
    group oracle is supplied."""

    def is_trivial_word(self, w: Word) -> TriState:
        return TriState.YES if not w else TriState.NO


_SYNTACTIC = _SyntacticOracle()


def _coeff_trivial(w: Word, ctx) -> bool:
    t = (ctx or _SYNTACTIC).is_trivial_word(w)
    if t == TriState.UNKNOWN:
        # A purely syntactic check still recognises the empty word.
        if not w:
            return True
        raise UndecidedError(f"cannot decide triviality of {word_str(w)}")
    return t == TriState.YES


def reduce_fpw(w: FreeProductWord, ctx=None) -> FreeProductWord:
    """Freely reduce in G * F, deleting coefficient syllables trivial in G."""
    out = []
    for syl in w.syllables:
        s = syl
        while s is not None:
            if s[0] == X:
                if s[2] == 0:
                    s = None
                elif out and out[-1][0] == X and out[-1][1] == s[1]:
                    top = out.pop()
                    s = (X, s[1], top[2] + s[2])
                else:
                    out.append(s)
                    s = None
            else:
                if _coeff_trivial(s[1], ctx):
                    s = None
                elif out and out[-1][0] == C:
                    top = out.pop()
                    s = (C, wmul(top[1], s[1]))
                else:
                    out.append(s)
                    s = None
    return FreeProductWord(tuple(out))


def cyclically_reduce(w: FreeProductWord, ctx=None) -> FreeProductWord:
    """Cyclically reduce `w` in G * F.

    The result is a cyclic conjugate of the input, rotated (when x-letters
    survive) so that it starts with an x-syllable.  Coefficient triviality
    is decided by `ctx`.
    """
    w = reduce_fpw(w, ctx)
    while len(w.syllables) >= 2 and w.syllables[0][0] == w.syllables[-1][0]:
        first, last = w.syllables[0], w.syllables[-1]
        body = w.syllables[1:-1]
        # rotate the final syllable to the front and re-reduce
        w = reduce_fpw(FreeProductWord((last, first) + body), ctx)
    syls = w.syllables
    for i, s in enumerate(syls):
        if s[0] == X:
            return FreeProductWord(syls[i:] + syls[:i])
    return w


def free_product_length(w: FreeProductWord) -> int:
    return len(w.syllables)


def letter_form(w: FreeProductWord) -> list:
    """Expand a cyclically reduced word into single x-letters.

    Returns [(letter, sign, coeff_word), ...] where each entry is one
    x-letter occurrence followed by the coefficient (possibly empty) that
    separates it from the next letter, read cyclically.
    """
    letters = []
    syls = w.syllables
    if not syls:
        return letters
    if not any(s[0] == X for s in syls):
        raise ValueError("word has no x-letters")
    if syls[0][0] != X:
        raise ValueError("expected cyclically reduced word starting with an x-syllable")
    pending = None
    for s in syls:
        if s[0] == X:
            sign = 1 if s[2] > 0 else -1
            for _ in range(abs(s[2])):
                if pending is not None:
                    letters.append(pending)
                pending = [s[1], sign, ()]
        else:
            pending[2] = s[1]
    letters.append(pending)
    return [tuple(e) for e in letters]


def from_letter_form(letters) -> FreeProductWord:
    syls = []
    for letter, sign, coeff in letters:
        syls.append((X, letter, sign))
        if coeff:
            syls.append((C, tuple(coeff)))
    return reduce_fpw(FreeProductWord(tuple(syls)))


def invert_letter_form(letters) -> list:
    """Letter form of the inverse word, rotated to start with an x-letter."""
    n = len(letters)
    out = []
    for j in range(n):
        i = (n - 1 - j) % n
        prev = (i - 1) % n
        out.append((letters[i][0], -letters[i][1], winv(letters[prev][2])))
    return out


def rotate_letters(letters, i: int) -> list:
    return letters[i:] + letters[:i]


def _coeffs_equal(u: Word, v: Word, ctx) -> TriState:
    if u == v:
        return TriState.YES
    return (ctx or _SYNTACTIC).is_trivial_word(wmul(u, winv(v)))


def letters_equal(a, b, ctx=None) -> TriState:
    """Equality of two letter-form words, coefficients compared in G."""
    if len(a) != len(b):
        return TriState.NO
    verdict = TriState.YES
    for (l1, s1, c1), (l2, s2, c2) in zip(a, b):
        if l1 != l2 or s1 != s2:
            return TriState.NO
        eq = _coeffs_equal(c1, c2, ctx)
        if eq == TriState.NO:
            return TriState.NO
        if eq == TriState.UNKNOWN:
            verdict = TriState.UNKNOWN
    return verdict


def is_proper_power(w: FreeProductWord, ctx=None):
    """Maximal proper-power decomposition of a cyclically reduced word.

    Returns (root, exponent) with exponent >= 2, or None.  Coefficient
    comparisons go through `ctx`.  Purely coefficient words are never
    reported (relators of interest always contain x-letters).
    """
    syls = w.syllables
    if len(syls) == 1 and syls[0][0] == X and abs(syls[0][2]) >= 2:
        letter, exp = syls[0][1], syls[0][2]
        sign = 1 if exp > 0 else -1
        return FreeProductWord(((X, letter, sign),)), abs(exp)
    if not any(s[0] == X for s in syls):
        return None
    letters = letter_form(w)
    n = len(letters)
    for d in range(1, n):
        if n % d:
            continue
        e = n // d
        if e < 2:
            continue
        if letters_equal(letters, rotate_letters(letters, d), ctx) == TriState.YES:
            return from_letter_form(letters[:d]), e
    return None


def cyclic_letters_conjugate(a, b, ctx=None) -> TriState:
    """Conjugacy in G * F of two cyclically reduced letter-form words."""
    if len(a) != len(b):
        return TriState.NO
    saw_unknown = False
    for i in range(len(a)):
        eq = letters_equal(a, rotate_letters(b, i), ctx)
        if eq == TriState.YES:
            return TriState.YES
        if eq == TriState.UNKNOWN:
            saw_unknown = True
    return TriState.UNKNOWN if saw_unknown else TriState.NO


# ---------------------------------------------------------------------------
# relative presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RelativePresentation:
    coeff: CoefficientGroup
    x_gens: tuple
    relators: tuple  # FreeProductWord, raw or reduced

    def __post_init__(self):
        clash = set(self.x_gens) & set(self.coeff.generators)
        if clash:
            raise ValueError(f"x-generators clash with coefficient generators: {sorted(clash)}")
        for r in self.relators:
            for s in r.syllables:
                if s[0] == X and s[1] not in self.x_gens:
                    raise ValueError(f"unknown x-generator {s[1]!r} in relator")


@dataclass(frozen=True)
class OrientabilityResult:
    status: TriState
    witness: str = ""


def is_orientable(p: RelativePresentation, ctx=None) -> OrientabilityResult:
    """Check the two relator conditions that orientability requires.

    Fails when a relator is conjugate in G * F into G, or when two
    relators (or a relator and an inverse, including a relator and its own
    inverse) are conjugate.  Conjugacy is decided by cyclic rotation of
    syllables with coefficient equality delegated to `ctx`.
    """
    reduced = [cyclically_reduce(r, ctx) for r in p.relators]
    for i, r in enumerate(reduced):
        if not any(s[0] == X for s in r.syllables):
            return OrientabilityResult(
                TriState.NO, f"relator {i} is conjugate to a coefficient-group element")
    lforms = [letter_form(r) for r in reduced]
    inv_lforms = [invert_letter_form(lf) for lf in lforms]
    saw_unknown = False
    for i in range(len(lforms)):
        for j in range(i, len(lforms)):
            if i != j:
                c = cyclic_letters_conjugate(lforms[i], lforms[j], ctx)
                if c == TriState.YES:
                    return OrientabilityResult(
                        TriState.NO, f"relators {i} and {j} are conjugate")
                saw_unknown |= c == TriState.UNKNOWN
            c = cyclic_letters_conjugate(lforms[i], inv_lforms[j], ctx)
            if c == TriState.YES:
                return OrientabilityResult(
                    TriState.NO,
                    f"relator {i} is conjugate to the inverse of relator {j}")
            saw_unknown |= c == TriState.UNKNOWN
    if saw_unknown:
        return OrientabilityResult(TriState.UNKNOWN, "coefficient comparisons undecided")
    return OrientabilityResult(TriState.YES)


# ---------------------------------------------------------------------------
# mu
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MuValue:
    value: Fraction
    lower_bound_only: bool
    orders: tuple  # OrderResult for |g|, |h|, |g h^-1|


def mu(ctx, g: Word, h: Word) -> MuValue:
    """1/|g| + 1/|h| + 1/|g h^-1| with 1/infinity = 0.

    When any order query exhausts its budget the value is only a lower
    bound (an unknown order might be finite), and the result is flagged.
    """
    orders = (ctx.element_order(g), ctx.element_order(h),
              ctx.element_order(wmul(g, winv(h))))
    total = Fraction(0)
    lower_only = False
    for o in orders:
        if o.is_finite:
            total += Fraction(1, o.value)
        elif o.is_unknown:
            lower_only = True
    return MuValue(total, lower_only, orders)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} (line {line}, column {col})")
        self.line = line
        self.col = col


_NAME_CHARS = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_")


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg):
        raise ParseError(msg, self.line, self.col)

    def _advance(self, n: int):
        for ch in self.text[self.pos:self.pos + n]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self._advance(1)
        if self.pos >= len(self.text):
            return None
        return self.text[self.pos]

    def take_punct(self, ch: str) -> bool:
        if self.peek() == ch:
            self._advance(1)
            return True
        return False

    def expect(self, ch: str):
        if not self.take_punct(ch):
            self.error(f"expected {ch!r}")

    def take_name(self) -> Optional[str]:
        c = self.peek()
        if c is None or not (c.isalpha() or c == "_"):
            return None
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] in _NAME_CHARS:
            self._advance(1)
        return self.text[start:self.pos]

    def take_int(self) -> int:
        c = self.peek()
        sign = 1
        if c == "-":
            self._advance(1)
            sign = -1
        digits = ""
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            digits += self.text[self.pos]
            self._advance(1)
        if not digits:
            self.error("expected an integer")
        return sign * int(digits)

    def take_keyword(self, kw: str) -> bool:
        save = (self.pos, self.line, self.col)
        name = self.take_name()
        if name == kw:
            return True
        self.pos, self.line, self.col = save
        return False

    def expect_keyword(self, kw: str):
        if not self.take_keyword(kw):
            self.error(f"expected keyword {kw!r}")


def _parse_token(tz: _Tokenizer):
    name = tz.take_name()
    if name is None:
        return None
    exp = 1
    if tz.take_punct("^"):
        exp = tz.take_int()
        if exp == 0:
            tz.error("zero exponent")
    return name, exp


def _parse_word_tokens(tz: _Tokenizer) -> list:
    toks = []
    while True:
        t = _parse_token(tz)
        if t is None:
            break
        toks.append(t)
    if not toks:
        tz.error("expected a word")
    return toks


def parse_presentation(text: str) -> RelativePresentation:
    """Parse the presentation grammar.

    ``group <gens | relators>; <x-gens>; rel <word> [; rel <word>]*``

    Generators are comma- or space-separated names; relator words are
    whitespace-separated tokens ``name`` or ``name^int`` with commas
    between relators.  Relative relators come back raw: reduction is a
    separate step.
    """
    tz = _Tokenizer(text)
    tz.expect_keyword("group")
    tz.expect("<")
    gens = []
    while True:
        name = tz.take_name()
        if name is None:
            break
        gens.append(name)
        tz.take_punct(",")
    if not gens:
        tz.error("coefficient group needs at least one generator")
    tz.expect("|")
    relators = []
    while tz.peek() != ">":
        if tz.peek() is None:
            tz.error("unterminated group presentation")
        relators.append(tuple(_parse_word_tokens(tz)))
        if not tz.take_punct(","):
            break
    tz.expect(">")
    tz.expect(";")
    for rel in relators:
        for g, _ in rel:
            if g not in gens:
                tz.error(f"relator uses unknown generator {g!r}")
    x_gens = []
    while True:
        name = tz.take_name()
        if name is None:
            break
        x_gens.append(name)
        tz.take_punct(",")
    if not x_gens:
        tz.error("expected at least one x-generator")
    clash = set(x_gens) & set(gens)
    if clash:
        tz.error(f"x-generator {sorted(clash)[0]!r} clashes with a coefficient generator")
    tz.expect(";")
    known = set(gens) | set(x_gens)
    rel_words = []
    while True:
        tz.expect_keyword("rel")
        toks = _parse_word_tokens(tz)
        syls = []
        for name, exp in toks:
            if name not in known:
                tz.error(f"unknown generator {name!r}")
            if name in x_gens:
                syls.append((X, name, exp))
            else:
                syls.append((C, ((name, exp),)))
        rel_words.append(FreeProductWord(tuple(syls)))
        if not tz.take_punct(";"):
            break
    if tz.peek() is not None:
        tz.error("trailing input after final relator")
    coeff = CoefficientGroup(tuple(gens), tuple(relators))
    return RelativePresentation(coeff, tuple(x_gens), tuple(rel_words))
