"""Word/element model of the two sphere *-algebras and their rewrite systems.

Two presentations are provided:

* kind ``S``  -- generators x_1..x_n, y_1..y_n and adjoints, the full
  quadratic relation set plus the unit-sphere relation;
* kind ``Sigma`` -- generators y_1..y_{n+1} and adjoints (the quotient in
  which x_1..x_{n-1} vanish and y_{n+1} stands for x_n, a normal element).

Normal order puts the starred block before the unstarred block, the x
family before the y family inside each block, and ascending indices inside
each family.  Every relation is oriented so that its left-hand side is the
out-of-order adjacent pair, which makes orientation uniform and the rule
set star-closed.

When sphere reduction is enabled the largest diagonal quadratic (y_n* y_n
for kind S, y_{n+1}* y_{n+1} for kind Sigma) is eliminated through the
sphere relation.  A normal word then contains at most one of the two
eliminated letters: if both occur, every letter between them exchanges
with one of them by a pure scalar, so the pair is pulled together and
cancelled.  Rule right-hand sides are interreduced at build time and a
termination measure is machine-checked for every rule.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .scalar import DomainError, LaurentPoly

ONE = LaurentPoly.one()
Q = LaurentPoly.q

DEFAULT_FUEL = 1_000_000


class PresentationError(ValueError):
    """The rule set violates a structural invariant."""


class RewriteFuelError(RuntimeError):
    """Normalization did not reach a fixed point within the fuel bound."""

    def __init__(self, word, fuel):
        super().__init__(f"rewrite fuel {fuel} exhausted while reducing {word}")
        self.word = word
        self.fuel = fuel


@dataclass(frozen=True)
class Generator:
    """A single algebra generator: family 'x' or 'y', index >= 1, adjoint flag."""

    family: str
    index: int
    starred: bool = False

    def star(self) -> Generator:
        return Generator(self.family, self.index, not self.starred)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (0 if self.starred else 1, 0 if self.family == "x" else 1, self.index)

    def __str__(self):
        return f"{self.family}{self.index}" + ("'" if self.starred else "")

    __repr__ = __str__


def x(i: int, starred: bool = False) -> Generator:
    return Generator("x", i, starred)


def y(i: int, starred: bool = False) -> Generator:
    return Generator("y", i, starred)


@dataclass(frozen=True)
class Word:
    """A finite product of generators; the empty word is the unit."""

    letters: tuple[Generator, ...] = ()

    def star(self) -> Word:
        return Word(tuple(g.star() for g in reversed(self.letters)))

    def __mul__(self, other: Word) -> Word:
        return Word(self.letters + other.letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    @property
    def sort_key(self):
        return tuple(g.sort_key for g in self.letters)

    def __str__(self):
        return "".join(str(g) for g in self.letters) if self.letters else "1"

    __repr__ = __str__


EMPTY_WORD = Word()


class Element:
    """A finite formal sum of words with Laurent-polynomial coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        data: dict[Word, LaurentPoly] = {}
        if terms:
            for word, coeff in terms.items():
                if not isinstance(coeff, LaurentPoly):
                    coeff = LaurentPoly.const(coeff)
                if coeff:
                    data[word] = coeff
        self._terms = data

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> Element:
        return cls()

    @classmethod
    def one(cls) -> Element:
        return cls({EMPTY_WORD: ONE})

    @classmethod
    def from_word(cls, word: Word, coeff=ONE) -> Element:
        return cls({word: coeff})

    @classmethod
    def of(cls, *gens: Generator, coeff=ONE) -> Element:
        return cls({Word(tuple(gens)): coeff})

    # -- inspection ------------------------------------------------------

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key)

    def coeff(self, word: Word) -> LaurentPoly:
        return self._terms.get(word, LaurentPoly.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def words(self):
        return self._terms.keys()

    # -- algebra ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        terms = dict(self._terms)
        for word, coeff in other._terms.items():
            new = terms.get(word, LaurentPoly.zero()) + coeff
            if new:
                terms[word] = new
            else:
                terms.pop(word, None)
        out = Element.__new__(Element)
        out._terms = terms
        return out

    def __neg__(self):
        out = Element.__new__(Element)
        out._terms = {w: -c for w, c in self._terms.items()}
        return out

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            if not isinstance(other, LaurentPoly):
                other = LaurentPoly.const(other)
            return Element({w: c * other for w, c in self._terms.items()})
        if not isinstance(other, Element):
            return NotImplemented
        terms: dict[Word, LaurentPoly] = {}
        for w1, c1 in self._terms.items():
            for w2, c2 in other._terms.items():
                w = w1 * w2
                new = terms.get(w, LaurentPoly.zero()) + c1 * c2
                if new:
                    terms[w] = new
                else:
                    terms.pop(w, None)
        out = Element.__new__(Element)
        out._terms = terms
        return out

    def __rmul__(self, other):
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise DomainError("negative powers of elements are undefined")
        out = Element.one()
        for _ in range(n):
            out = out * self
        return out

    def star(self) -> Element:
        """The adjoint: reverse each word, toggle stars, keep coefficients."""
        return Element({w.star(): c for w, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __str__(self):
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{w}" for w, c in self.items())

    __repr__ = __str__


def star(e: Element) -> Element:
    return e.star()


class Presentation:
    """Generator order plus oriented rewrite rules for one of the algebras."""

    def __init__(self, kind, n, sphere_reduction, generators, rules, eliminated,
                 left_scalar=None, right_scalar=None):
        self.kind = kind
        self.n = n
        self.sphere_reduction = sphere_reduction
        self.generators = tuple(generators)
        self.rank = {g: i for i, g in enumerate(self.generators)}
        self.rules = dict(rules)
        self.eliminated = eliminated
        self.left_scalar = dict(left_scalar or {})
        self.right_scalar = dict(right_scalar or {})

    # -- word orders -----------------------------------------------------

    def contains(self, g: Generator) -> bool:
        return g in self.rank

    def _elim_count(self, letters) -> int:
        if self.eliminated is None:
            return 0
        estar, e = self.eliminated
        return min(sum(1 for g in letters if g == estar),
                   sum(1 for g in letters if g == e))

    def word_measure(self, word: Word) -> tuple[int, int, int]:
        """(eliminated-pair count, weighted inversion count, length).

        The inversion weight of a disordered pair is the sum of the two
        generator ranks plus one, which makes the diagonal exchange rules
        that shift to strictly smaller indices decrease strictly.
        """
        ranks = [self.rank[g] for g in word.letters]
        winv = 0
        for i in range(len(ranks)):
            for j in range(i + 1, len(ranks)):
                if ranks[i] > ranks[j]:
                    winv += ranks[i] + ranks[j] + 1
        return (self._elim_count(word.letters), winv, len(ranks))

    def word_key(self, word: Word):
        return self.word_measure(word) + (tuple(self.rank[g] for g in word.letters),)

    # -- single rewrite step ----------------------------------------------

    def reduce_word_once(self, word: Word) -> Element | None:
        """Apply one rule at the leftmost redex, or pull a scattered
        eliminated pair together; None if the word is normal."""
        letters = word.letters
        for i in range(len(letters) - 1):
            rhs = self.rules.get((letters[i], letters[i + 1]))
            if rhs is not None:
                prefix, suffix = letters[:i], letters[i + 2:]
                return Element({Word(prefix + rw.letters + suffix): rc
                                for rw, rc in rhs._terms.items()})
        if self.eliminated is not None:
            return self._reduce_scattered(letters)
        return None

    def _reduce_scattered(self, letters) -> Element | None:
        # Pulling the pair together creates out-of-order boundary pairs that
        # the exchange rules would immediately undo, so the sphere rule is
        # applied in the same composite step.
        estar, e = self.eliminated
        pos_star = max((i for i, g in enumerate(letters) if g == estar), default=None)
        if pos_star is None:
            return None
        pos_e = next((i for i in range(pos_star + 1, len(letters)) if letters[i] == e), None)
        if pos_e is None:
            return None
        mid = letters[pos_star + 1:pos_e]
        coeff = ONE
        split = 0
        while split < len(mid) and mid[split] in self.right_scalar:
            coeff = coeff * self.right_scalar[mid[split]]
            split += 1
        for g in mid[split:]:
            if g not in self.left_scalar:
                raise PresentationError(f"no scalar exchange past {g} for the eliminated pair")
            coeff = coeff * self.left_scalar[g]
        head = letters[:pos_star] + mid[:split]
        tail = mid[split:] + letters[pos_e + 1:]
        sphere_rhs = self.rules[self.eliminated]
        return Element({Word(head + rw.letters + tail): coeff * rc
                        for rw, rc in sphere_rhs._terms.items()})

    def is_normal_word(self, word: Word) -> bool:
        letters = word.letters
        for i in range(len(letters) - 1):
            if (letters[i], letters[i + 1]) in self.rules:
                return False
        if self.eliminated is not None:
            estar, e = self.eliminated
            if estar in letters and e in letters:
                return False
        return True

    # -- build-time validation ---------------------------------------------

    def validate(self):
        """Check star stability of the generator set and the termination
        measure: every rule's right-hand-side words sit strictly below its
        left-hand side."""
        for g in self.generators:
            if not self.contains(g.star()):
                raise PresentationError(f"generator set not star-closed at {g}")
        for (a, b), rhs in self.rules.items():
            lhs_measure = self.word_measure(Word((a, b)))
            for word in rhs.words():
                if not self.word_measure(word) < lhs_measure:
                    raise PresentationError(
                        f"rule {a}{b} -> ... does not decrease the measure at {word}")

    def __repr__(self):
        return (f"Presentation(kind={self.kind}, n={self.n}, "
                f"sphere={'on' if self.sphere_reduction else 'off'}, "
                f"{len(self.rules)} rules)")


# -- relation sets ---------------------------------------------------------


def relations_S(n: int) -> list[tuple[str, Element]]:
    """Defining relations of the 4n-1 sphere algebra as LHS - RHS elements,
    including all star conjugates and the sphere relation."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rels: list[tuple[str, Element]] = []

    def add(name, element):
        rels.append((name, element))

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i < j:
                add(f"xx[{i},{j}]", Element.of(x(i), x(j)) - Element.of(x(j), x(i), coeff=Q(-1)))
            if i > j:
                add(f"yy[{i},{j}]", Element.of(y(i), y(j)) - Element.of(y(j), y(i), coeff=Q(-1)))
            if i != j:
                add(f"xy[{i},{j}]", Element.of(x(i), y(j)) - Element.of(y(j), x(i), coeff=Q(-1)))
                add(f"xxs[{i},{j}]", Element.of(x(i), x(j, True)) - Element.of(x(j, True), x(i), coeff=Q(1)))
                corr = Element.of(x(i, True), x(j), coeff=(Q(2) - ONE) * Q(2 * n + 2 - i - j))
                add(f"yys[{i},{j}]", Element.of(y(i), y(j, True)) - Element.of(y(j, True), y(i), coeff=Q(1)) + corr)
            if i < j:
                add(f"xys[{i},{j}]", Element.of(x(i), y(j, True)) - Element.of(y(j, True), x(i), coeff=Q(1)))
            if i > j:
                corr = Element.of(y(i, True), x(j), coeff=(Q(2) - ONE) * Q(i - j))
                add(f"xys[{i},{j}]", Element.of(x(i), y(j, True)) - Element.of(y(j, True), x(i), coeff=Q(1)) - corr)

    for i in range(1, n + 1):
        tail = Element.zero()
        for k in range(1, i):
            tail = tail + Element.of(x(k), y(k), coeff=(Q(2) - ONE) * Q(i - k))
        add(f"yx[{i}]", Element.of(y(i), x(i)) - Element.of(x(i), y(i), coeff=Q(2)) - tail)

        tail = Element.zero()
        for k in range(1, i):
            tail = tail + Element.of(x(k, True), x(k))
        add(f"xxs[{i}]", Element.of(x(i), x(i, True)) - Element.of(x(i, True), x(i))
            - (ONE - Q(2)) * tail)

        inner = Element.of(x(i, True), x(i), coeff=Q(2 * (n + 1 - i)))
        for k in range(1, n + 1):
            inner = inner + Element.of(x(k, True), x(k))
        for k in range(i + 1, n + 1):
            inner = inner + Element.of(y(k, True), y(k))
        add(f"yys[{i}]", Element.of(y(i), y(i, True)) - Element.of(y(i, True), y(i))
            - (ONE - Q(2)) * inner)

        add(f"xys[{i}]", Element.of(x(i), y(i, True)) - Element.of(y(i, True), x(i), coeff=Q(2)))

    sphere = -Element.one()
    for i in range(1, n + 1):
        sphere = sphere + Element.of(x(i, True), x(i)) + Element.of(y(i, True), y(i))
    add("sphere", sphere)

    return _with_stars(rels)


def relations_Sigma(n: int) -> list[tuple[str, Element]]:
    """Defining relations of the 2n+1 quotient algebra on y_1..y_{n+1},
    including all star conjugates and the sphere relation."""
    if n < 1:
        raise DomainError("n must be >= 1")
    rels: list[tuple[str, Element]] = []

    def add(name, element):
        rels.append((name, element))

    for i in range(1, n + 2):
        for j in range(1, i):
            if (i, j) == (n + 1, n):
                continue
            add(f"yy[{i},{j}]", Element.of(y(i), y(j)) - Element.of(y(j), y(i), coeff=Q(-1)))
            add(f"ysy[{i},{j}]", Element.of(y(i, True), y(j)) - Element.of(y(j), y(i, True), coeff=Q(-1)))
    add(f"yy[{n + 1},{n}]", Element.of(y(n + 1), y(n)) - Element.of(y(n), y(n + 1), coeff=Q(-2)))
    add(f"ysy[{n + 1},{n}]", Element.of(y(n + 1, True), y(n)) - Element.of(y(n), y(n + 1, True), coeff=Q(-2)))

    for i in range(1, n + 2):
        if i == n:
            continue
        tail = Element.zero()
        for k in range(i + 1, n + 2):
            tail = tail + Element.of(y(k, True), y(k))
        add(f"diag[{i}]", Element.of(y(i), y(i, True)) - Element.of(y(i, True), y(i))
            - (ONE - Q(2)) * tail)
    add(f"diag[{n}]", Element.of(y(n), y(n, True)) - Element.of(y(n, True), y(n))
        - Element.of(y(n + 1, True), y(n + 1), coeff=ONE - Q(4)))

    sphere = -Element.one()
    for i in range(1, n + 2):
        sphere = sphere + Element.of(y(i, True), y(i))
    add("sphere", sphere)

    return _with_stars(rels)


def _with_stars(rels):
    out = list(rels)
    for name, element in rels:
        conj = element.star()
        if conj != element:
            out.append((name + "*", conj))
    return out


# -- presentation construction ----------------------------------------------


def _generators_S(n):
    return ([x(i, True) for i in range(1, n + 1)] + [y(i, True) for i in range(1, n + 1)]
            + [x(i) for i in range(1, n + 1)] + [y(i) for i in range(1, n + 1)])


def _generators_Sigma(n):
    return [y(i, True) for i in range(1, n + 2)] + [y(i) for i in range(1, n + 2)]


def _orient(p: Presentation, element: Element) -> tuple[tuple[Generator, Generator], Element]:
    """Solve a relation for its largest word, which becomes the rule LHS.

    The largest word is taken under (weighted inversions, length, ranks);
    the eliminated-pair component is ignored here because the sphere
    relation is the one place where the eliminated pair must itself win.
    """
    def key(word):
        elim, winv, length = p.word_measure(word)
        return (winv, length, tuple(p.rank[g] for g in word.letters))

    lead = max(element.words(), key=key)
    coeff = element.coeff(lead)
    if coeff.as_monomial() is None:
        raise PresentationError(f"cannot orient relation: leading coefficient {coeff} "
                                "is not an invertible monomial")
    if len(lead) != 2:
        raise PresentationError(f"rule left-hand side {lead} is not a length-2 word")
    rest = element - Element.from_word(lead, coeff)
    rhs = rest * (-1 * coeff.monomial_inverse())
    return (lead.letters[0], lead.letters[1]), rhs


def _scalar_exchange(rules, mover_left: Generator, other: Generator):
    """If the rule for (mover_left, other) is a pure scalar exchange,
    return the coefficient c with other*mover_left = c * mover_left*other."""
    rhs = rules.get((mover_left, other))
    if rhs is None or len(rhs._terms) != 1:
        return None
    [(word, coeff)] = rhs._terms.items()
    if word.letters != (other, mover_left):
        return None
    if coeff.as_monomial() is None:
        return None
    return coeff.monomial_inverse()


def _build_presentation(kind: str, n: int, sphere_reduction: bool) -> Presentation:
    if n < 1:
        raise DomainError("n must be >= 1")
    if kind == "S":
        gens = _generators_S(n)
        rels = relations_S(n)
        eliminated = (y(n, True), y(n))
    else:
        gens = _generators_Sigma(n)
        rels = relations_Sigma(n)
        eliminated = (y(n + 1, True), y(n + 1))

    proto = Presentation(kind, n, sphere_reduction, gens, {},
                         eliminated if sphere_reduction else None)

    rules: dict[tuple[Generator, Generator], Element] = {}
    for name, element in rels:
        if name.startswith("sphere") and not sphere_reduction:
            continue
        lhs, rhs = _orient(proto, element)
        if lhs in rules:
            if rules[lhs] != rhs:
                raise PresentationError(f"conflicting rules for {lhs[0]}{lhs[1]} ({name})")
            continue
        rules[lhs] = rhs
    if sphere_reduction and eliminated not in rules:
        raise PresentationError("sphere relation did not orient to the eliminated pair")

    p = Presentation(kind, n, sphere_reduction, gens, rules,
                     eliminated if sphere_reduction else None)
    if sphere_reduction:
        estar, e = eliminated
        for g in gens:
            if g.starred or g == e:
                continue
            left = _scalar_exchange(rules, e, g)
            if left is not None:
                p.left_scalar[g] = left
            right = _scalar_exchange(rules, g, estar)
            if right is not None:
                p.right_scalar[g] = right

    # Interreduce: rewrite every right-hand side to normal form so that no
    # rule ever reintroduces a reducible word (with sphere reduction on,
    # the raw diagonal relations mention the eliminated pair).
    for _ in range(20):
        changed = False
        for lhs in list(p.rules):
            nf = normalize(p.rules[lhs], p)
            if nf != p.rules[lhs]:
                p.rules[lhs] = nf
                changed = True
        if not changed:
            break
    else:
        raise PresentationError("rule interreduction did not converge")

    p.validate()
    return p


_PRESENTATIONS: dict[tuple[str, int, bool], Presentation] = {}


def presentation_S(n: int, sphere_reduction: bool = True) -> Presentation:
    """Presentation of the 4n-1 sphere algebra on x_1..x_n, y_1..y_n."""
    key = ("S", n, sphere_reduction)
    if key not in _PRESENTATIONS:
        _PRESENTATIONS[key] = _build_presentation(*key)
    return _PRESENTATIONS[key]


def presentation_Sigma(n: int, sphere_reduction: bool = True) -> Presentation:
    """Presentation of the 2n+1 quotient algebra on y_1..y_{n+1}."""
    key = ("Sigma", n, sphere_reduction)
    if key not in _PRESENTATIONS:
        _PRESENTATIONS[key] = _build_presentation(*key)
    return _PRESENTATIONS[key]


# -- normalization -----------------------------------------------------------


def _default_fuel() -> int:
    return int(os.environ.get("QSPHERE_FUEL", DEFAULT_FUEL))


def normalize_steps(e: Element, p: Presentation, fuel: int | None = None) -> tuple[Element, int]:
    """Normalize and report the number of rule applications used."""
    if fuel is None:
        fuel = _default_fuel()
    if fuel <= 0:
        raise DomainError("fuel must be positive")
    for word in e.words():
        for g in word:
            if not p.contains(g):
                raise DomainError(f"generator {g} does not belong to the {p.kind} presentation")

    pending = dict(e._terms)
    done: dict[Word, LaurentPoly] = {}
    steps = 0
    while pending:
        word = max(pending, key=p.word_key)
        coeff = pending.pop(word)
        replacement = p.reduce_word_once(word)
        if replacement is None:
            new = done.get(word, LaurentPoly.zero()) + coeff
            if new:
                done[word] = new
            else:
                done.pop(word, None)
            continue
        steps += 1
        if steps > fuel:
            raise RewriteFuelError(word, fuel)
        for rw, rc in replacement._terms.items():
            new = pending.get(rw, LaurentPoly.zero()) + coeff * rc
            if new:
                pending[rw] = new
            else:
                pending.pop(rw, None)
    return Element(done), steps


def normalize(e: Element, p: Presentation, fuel: int | None = None) -> Element:
    """Rewrite an element to its normal form under the presentation's rules."""
    return normalize_steps(e, p, fuel)[0]


# -- quotient map ------------------------------------------------------------


def quotient_map(e: Element, n: int) -> Element:
    """Project an element of the S presentation into the Sigma presentation.

    Words containing x_i or x_i* with i < n map to zero; x_n becomes
    y_{n+1}; the y generators are unchanged.
    """
    out = Element.zero()
    for word, coeff in e._terms.items():
        letters = []
        dead = False
        for g in word:
            if g.family == "x":
                if g.index < n:
                    dead = True
                    break
                letters.append(y(n + 1, g.starred))
            else:
                letters.append(g)
        if not dead:
            out = out + Element.from_word(Word(tuple(letters)), coeff)
    return out


# -- confluence probe ---------------------------------------------------------


@dataclass
class ProbeReport:
    """Result of randomized two-path normalization trials."""

    trials: int
    discrepancies: list = field(default_factory=list)
    max_steps: int = 0

    @property
    def ok(self) -> bool:
        return not self.discrepancies


def confluence_probe(p: Presentation, trials: int, seed: int, max_len: int) -> ProbeReport:
    """Normalize random words directly and after one random admissible
    rewrite; any pair of distinct normal forms is reported."""
    if trials <= 0 or max_len <= 0:
        raise DomainError("trials and max_len must be positive")
    rng = random.Random(seed)
    report = ProbeReport(trials)
    for _ in range(trials):
        length = rng.randint(1, max_len)
        word = Word(tuple(rng.choice(p.generators) for _ in range(length)))
        element = Element.from_word(word)
        direct, steps1 = normalize_steps(element, p)

        redexes = [i for i in range(length - 1)
                   if (word.letters[i], word.letters[i + 1]) in p.rules]
        if redexes:
            i = rng.choice(redexes)
            rhs = p.rules[(word.letters[i], word.letters[i + 1])]
            prefix, suffix = word.letters[:i], word.letters[i + 2:]
            stepped = Element({Word(prefix + rw.letters + suffix): rc
                               for rw, rc in rhs._terms.items()})
        else:
            stepped = element
        alt, steps2 = normalize_steps(stepped, p)
        report.max_steps = max(report.max_steps, steps1, steps2)
        if direct != alt:
            report.discrepancies.append((str(word), str(direct), str(alt)))
    return report
