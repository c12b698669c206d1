"""Truncated irreducible representations of the 2n+1 quotient algebra.

The representation acts on the span of basis vectors |k>, k in N^n with
every component cut off at K.  The lowering generators y_1..y_n shift one
component down with a sqrt(1 - q^(2k)) style factor (the n-th component
carries q^4 powers), their adjoints shift up with the index advanced by
one, and y_{n+1} is diagonal with unitary parameter lambda:

    y_i  |k> = q^(k_1+..+k_{i-1}) sqrt(1 - q^(2 k_i))   |k - e_i>   (i < n)
    y_n  |k> = q^(k_1+..+k_{n-1}) sqrt(1 - q^(4 k_n))   |k - e_n>
    y_i* |k> = q^(k_1+..+k_{i-1}) sqrt(1 - q^(2 k_i+2)) |k + e_i>   (i < n)
    y_n* |k> = q^(k_1+..+k_{n-1}) sqrt(1 - q^(4 k_n+4)) |k + e_n>
    y_{n+1} |k> = lambda q^(|k| + k_n) |k>

Raising past the cutoff annihilates the vector, so defining relations are
only guaranteed on interior indices (all components <= K - 2).

Two amplitude modes are supported.  Numeric mode stores complex doubles.
Exact-radical mode keeps amplitudes symbolic in q as a Gaussian-rational
pair of radical sums, so identity checks yield exact zeros; it requires
lambda to be an exact rational point on the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .algebra import Element, Generator
from .scalar import DomainError, LaurentPoly, RadicalSum, radical_canonicalize

_EXACT_COMPLEX = {1 + 0j: (Fraction(1), Fraction(0)),
                  -1 + 0j: (Fraction(-1), Fraction(0)),
                  1j: (Fraction(0), Fraction(1)),
                  -1j: (Fraction(0), Fraction(-1))}


@dataclass(frozen=True)
class RepConfig:
    """Truncation parameters: rank n, rational q0 in (0,1), unitary lambda,
    per-component cutoff K, and amplitude mode."""

    n: int
    q0: Fraction
    lam: complex
    K: int
    mode: str = "numeric"
    lam_exact: tuple[Fraction, Fraction] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be >= 1")
        if self.K < 0:
            raise DomainError("cutoff K must be >= 0")
        q0 = Fraction(self.q0)
        if not 0 < q0 < 1:
            raise DomainError(f"q0 = {self.q0} is outside (0, 1)")
        object.__setattr__(self, "q0", q0)
        if self.mode not in ("numeric", "exact"):
            raise DomainError(f"unknown mode {self.mode!r}")
        lam = complex(self.lam)
        object.__setattr__(self, "lam", lam)
        exact = self.lam_exact
        if exact is None:
            exact = _EXACT_COMPLEX.get(lam)
        if exact is not None:
            re, im = Fraction(exact[0]), Fraction(exact[1])
            if re * re + im * im != 1:
                raise DomainError(f"exact lambda {exact} is not on the unit circle")
            object.__setattr__(self, "lam_exact", (re, im))
            object.__setattr__(self, "lam", complex(float(re), float(im)))
        else:
            if abs(abs(lam) - 1.0) > 1e-12:
                raise DomainError(f"|lambda| = {abs(lam)} is not 1 within 1e-12")
        if self.mode == "exact" and self.lam_exact is None:
            raise DomainError("exact mode needs an exact rational unit lambda")

    @property
    def dim(self) -> int:
        return (self.K + 1) ** self.n


def fock_indices(c: RepConfig):
    """All truncated indices in rank order (lexicographic, k_1 major)."""
    return product(range(c.K + 1), repeat=c.n)


def rank_of(k: tuple[int, ...], c: RepConfig) -> int:
    rank = 0
    for ki in k:
        rank = rank * (c.K + 1) + ki
    return rank


def index_of(rank: int, c: RepConfig) -> tuple[int, ...]:
    base = c.K + 1
    out = []
    for _ in range(c.n):
        rank, r = divmod(rank, base)
        out.append(r)
    return tuple(reversed(out))


def is_interior(k: tuple[int, ...], c: RepConfig, margin: int = 2) -> bool:
    """True when every component sits at least `margin` below the cutoff."""
    return all(ki <= c.K - margin for ki in k)


class ExactAmp:
    """A Gaussian-rational amplitude: (re + i*im) with RadicalSum parts."""

    __slots__ = ("re", "im")

    def __init__(self, re: RadicalSum, im: RadicalSum):
        self.re = re
        self.im = im

    @classmethod
    def one(cls) -> ExactAmp:
        return cls(RadicalSum.one(), RadicalSum.zero())

    def __add__(self, other: ExactAmp) -> ExactAmp:
        return ExactAmp(self.re + other.re, self.im + other.im)

    def mul_radical(self, rs) -> ExactAmp:
        return ExactAmp(self.re.mul_scalar(rs), self.im.mul_scalar(rs))

    def mul_poly(self, poly: LaurentPoly) -> ExactAmp:
        return ExactAmp(self.re.mul_poly(poly), self.im.mul_poly(poly))

    def mul_unit(self, re: Fraction, im: Fraction) -> ExactAmp:
        new_re = self.re.mul_poly(LaurentPoly.const(re)) - self.im.mul_poly(LaurentPoly.const(im))
        new_im = self.re.mul_poly(LaurentPoly.const(im)) + self.im.mul_poly(LaurentPoly.const(re))
        return ExactAmp(new_re, new_im)

    def is_zero(self) -> bool:
        return self.re.is_zero() and self.im.is_zero()

    def evaluate(self, q0) -> complex:
        return complex(self.re.evaluate(q0), self.im.evaluate(q0))

    def __eq__(self, other):
        if not isinstance(other, ExactAmp):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __str__(self):
        return f"({self.re}) + i*({self.im})"

    __repr__ = __str__


@dataclass
class StateVector:
    """Sparse vector on the truncated basis; amplitudes are complex numbers
    in numeric mode and ExactAmp values in exact mode."""

    mode: str
    amplitudes: dict[tuple[int, ...], object] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.amplitudes

    def items(self):
        return sorted(self.amplitudes.items())

    def max_abs(self, q0=None) -> float:
        """Largest amplitude magnitude; exact amplitudes are evaluated at q0."""
        worst = 0.0
        for amp in self.amplitudes.values():
            if self.mode == "numeric":
                worst = max(worst, abs(amp))
            else:
                worst = max(worst, abs(amp.evaluate(q0)))
        return worst


def basis_state(c: RepConfig, k: tuple[int, ...]) -> StateVector:
    k = tuple(k)
    if len(k) != c.n or any(ki < 0 or ki > c.K for ki in k):
        raise DomainError(f"index {k} outside the truncated basis")
    amp = ExactAmp.one() if c.mode == "exact" else complex(1.0)
    return StateVector(c.mode, {k: amp})


def _add_amp(store: dict, k: tuple[int, ...], amp, mode: str):
    old = store.get(k)
    new = amp if old is None else old + amp
    dead = new.is_zero() if mode == "exact" else new == 0
    if dead:
        store.pop(k, None)
    else:
        store[k] = new


def _shift_exponent(i: int, k: tuple[int, ...]) -> int:
    return sum(k[: i - 1])


def apply_generator(g: Generator, v: StateVector, c: RepConfig) -> StateVector:
    """Act with one generator, extending the basis action linearly."""
    if g.family != "y" or not 1 <= g.index <= c.n + 1:
        raise DomainError(f"generator {g} does not act in the rank-{c.n} representation")
    n, K, q0 = c.n, c.K, c.q0
    i = g.index
    out: dict[tuple[int, ...], object] = {}
    for k, amp in v.amplitudes.items():
        if i == n + 1:
            exp = sum(k) + k[-1]
            if c.mode == "exact":
                re, im = c.lam_exact
                if g.starred:
                    im = -im
                new = amp.mul_poly(LaurentPoly.q(exp)).mul_unit(re, im)
            else:
                lam = c.lam.conjugate() if g.starred else c.lam
                new = amp * (lam * float(q0 ** exp))
            _add_amp(out, k, new, c.mode)
            continue

        step = 4 if i == n else 2
        if g.starred:
            ki = k[i - 1]
            if ki == K:
                continue
            radicand_exp = step * (ki + 1)
            target = k[: i - 1] + (ki + 1,) + k[i:]
        else:
            ki = k[i - 1]
            if ki == 0:
                continue
            radicand_exp = step * ki
            target = k[: i - 1] + (ki - 1,) + k[i:]
        prefix = _shift_exponent(i, k)
        if c.mode == "exact":
            new = amp.mul_radical(radical_canonicalize([radicand_exp]))
            if prefix:
                new = new.mul_poly(LaurentPoly.q(prefix))
        else:
            factor = float(q0 ** prefix) * math.sqrt(float(1 - q0 ** radicand_exp))
            new = amp * factor
        _add_amp(out, target, new, c.mode)
    return StateVector(c.mode, out)


def apply_element(e: Element, v: StateVector, c: RepConfig) -> StateVector:
    """Act with an element: words act right to left, coefficients are kept
    symbolic in exact mode and evaluated at q0 in numeric mode."""
    total: dict[tuple[int, ...], object] = {}
    for word, coeff in e.items():
        current = v
        for g in reversed(word.letters):
            current = apply_generator(g, current, c)
            if current.is_zero():
                break
        if current.is_zero():
            continue
        if c.mode == "exact":
            for k, amp in current.amplitudes.items():
                _add_amp(total, k, amp.mul_poly(coeff), c.mode)
        else:
            scale = float(coeff.evaluate(c.q0))
            for k, amp in current.amplitudes.items():
                _add_amp(total, k, amp * scale, c.mode)
    return StateVector(c.mode, total)


@dataclass
class SparseMatrix:
    """Sparse complex matrix with entries sorted by (column, row)."""

    dim: int
    entries: list[tuple[int, int, complex]]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for row, col, value in self.entries:
            out[row, col] = value
        return out

    def diagonal(self) -> list[complex]:
        diag = [0j] * self.dim
        for row, col, value in self.entries:
            if row == col:
                diag[row] = value
        return diag

    def is_diagonal(self) -> bool:
        return all(row == col for row, col, _ in self.entries)


def matrix(e: Element, c: RepConfig) -> SparseMatrix:
    """Assemble the matrix of an element column by column (numeric)."""
    numeric = c if c.mode == "numeric" else RepConfig(c.n, c.q0, c.lam, c.K, "numeric",
                                                      c.lam_exact)
    entries: list[tuple[int, int, complex]] = []
    for col, k in enumerate(fock_indices(numeric)):
        image = apply_element(e, basis_state(numeric, k), numeric)
        for target, amp in image.items():
            entries.append((rank_of(target, numeric), col, amp))
    entries.sort(key=lambda t: (t[1], t[0]))
    return SparseMatrix(numeric.dim, entries)


def generator_matrix(g: Generator, c: RepConfig) -> SparseMatrix:
    return matrix(Element.of(g), c)


def yn1_spectrum(c: RepConfig) -> list[complex]:
    """The diagonal of y_{n+1} as a multiset: lambda * q0^(|k| + k_n)."""
    return [c.lam * float(c.q0 ** (sum(k) + k[-1])) for k in fock_indices(c)]


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def matrix_json(m: SparseMatrix, c: RepConfig, algebra: str = "Sigma") -> str:
    """Serialize a sparse matrix with 17-significant-digit values."""
    lam = c.lam
    header = (f'{{"algebra":"{algebra}","n":{c.n},"K":{c.K},'
              f'"q":"{c.q0.numerator}/{c.q0.denominator}",'
              f'"lambda":[{_fmt(lam.real)},{_fmt(lam.imag)}],'
              f'"dim":{m.dim},"basis_order":"lex_k1_major","entries":[')
    body = ",".join(f"[{row},{col},{_fmt(val.real)},{_fmt(val.imag)}]"
                    for row, col, val in m.entries)
    return header + body + "]}"
