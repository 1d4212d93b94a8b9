"""Formal root-subgroup words and Steinberg symbols.

A word is a sequence of letters x(alpha, t), kept in free-reduction normal
form: zero parameters are dropped and adjacent letters with the same root are
merged additively.  Words evaluate into any Chevalley model.  The symbol of
two units u, v at a root alpha is the word

    (u, v)_alpha = h(u) h(v) h(uv)^{-1},      h(u) = w(u) w(-1),
    w(u) = x(alpha, u) x(-alpha, -1/u) x(alpha, u)

which always evaluates to the identity matrix; its interest lies in the
relations it satisfies formally.  A concrete symbol model with the same
relations is the tame symbol at a prime p:

    (x, y) = (-1)^{ab} x^b y^{-a} mod p,   a = v_p(x), b = v_p(y).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chevalley import ChevalleyModel, GroupElement
from .kernel import as_ring_element, is_zero, one_like, ring_inv
from .rootsys import Root


class SteinbergWord:
    """Free-reduced word in the letters x(alpha, t)."""

    __slots__ = ("letters",)

    def __init__(self, letters: Sequence = ()):
        self.letters = _reduce_letters(letters)

    @staticmethod
    def generator(alpha: Root, t) -> "SteinbergWord":
        return SteinbergWord(((alpha, as_ring_element(t)),))

    def __mul__(self, other: "SteinbergWord") -> "SteinbergWord":
        return SteinbergWord(self.letters + other.letters)

    def inverse(self) -> "SteinbergWord":
        return SteinbergWord(tuple((a, -t) for a, t in reversed(self.letters)))

    def __len__(self):
        return len(self.letters)

    def __eq__(self, other):
        if not isinstance(other, SteinbergWord):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self):
        return hash(self.letters)

    def __repr__(self):
        if not self.letters:
            return "SteinbergWord(identity)"
        return "SteinbergWord(%s)" % " ".join(
            "x(%s; %s)" % (a.coords, t) for a, t in self.letters)


def _reduce_letters(letters):
    stack = []
    for alpha, t in letters:
        t = as_ring_element(t)
        if is_zero(t):
            continue
        while stack and stack[-1][0] == alpha:
            merged = stack[-1][1] + t
            stack.pop()
            if is_zero(merged):
                t = None
                break
            t = merged
        if t is not None:
            stack.append((alpha, t))
    return tuple(stack)


def w_letters(alpha: Root, u):
    u = as_ring_element(u)
    return ((alpha, u), (-alpha, -ring_inv(u)), (alpha, u))


def w_word(alpha: Root, u) -> SteinbergWord:
    """w(alpha, u) = x(alpha, u) x(-alpha, -1/u) x(alpha, u); u a unit."""
    return SteinbergWord(w_letters(alpha, u))


def h_letters(alpha: Root, u):
    u = as_ring_element(u)
    return w_letters(alpha, u) + w_letters(alpha, -one_like(u))


def h_word(alpha: Root, u) -> SteinbergWord:
    """h(alpha, u) = w(alpha, u) w(alpha, -1)."""
    return SteinbergWord(h_letters(alpha, u))


def symbol_word_letters(alpha: Root, u, v):
    """The 18 letters of h(u) h(v) h(uv)^{-1} before free reduction."""
    u = as_ring_element(u)
    v = as_ring_element(v)
    head = h_letters(alpha, u) + h_letters(alpha, v)
    tail = tuple((a, -t) for a, t in reversed(h_letters(alpha, u * v)))
    return head + tail


def symbol_word(alpha: Root, u, v) -> SteinbergWord:
    """The symbol (u, v)_alpha as a reduced word."""
    return SteinbergWord(symbol_word_letters(alpha, u, v))


def word_eval(word: SteinbergWord, model: ChevalleyModel, like=None) -> GroupElement:
    """Multiply out the word in the given matrix model."""
    if not word.letters:
        return model.identity(like=like)
    g = model.identity(like=one_like(word.letters[0][1]))
    for alpha, t in word.letters:
        g = g * model.e(alpha, t)
    return g


@dataclass
class SymbolCheck:
    alpha: Root
    u: object
    v: object
    ok: bool
    evaluated: GroupElement


def symbol_is_central_kernel(model: ChevalleyModel, alpha: Root, u, v) -> SymbolCheck:
    """Evaluate the symbol word; in a faithful model it must be the identity."""
    word = symbol_word(alpha, u, v)
    g = word_eval(word, model, like=one_like(as_ring_element(u)))
    return SymbolCheck(alpha=alpha, u=u, v=v, ok=g.is_identity(), evaluated=g)


# ---------------------------------------------------------------------------
# tame symbol model

def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class TameSymbol:
    """The tame symbol at a prime p on nonzero rationals.

    (x, y) = (-1)^{ab} x^b y^{-a} mod p with a = v_p(x) and b = v_p(y);
    values land in the cyclic group (Z/p)^*, returned as ints in 1..p-1.
    """

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError("%r is not prime" % (p,))
        self.p = p

    def valuation(self, x) -> int:
        x = Fraction(x)
        if x == 0:
            raise ValueError("zero has no valuation")
        v = 0
        num, den = x.numerator, x.denominator
        while num % self.p == 0:
            num //= self.p
            v += 1
        while den % self.p == 0:
            den //= self.p
            v -= 1
        return v

    def _unit_mod_p(self, x) -> int:
        """Reduce the p-unit part of x modulo p."""
        x = Fraction(x)
        v = self.valuation(x)
        num, den = x.numerator, x.denominator
        if v > 0:
            num //= self.p ** v
        elif v < 0:
            den //= self.p ** (-v)
        return (num * pow(den, -1, self.p)) % self.p

    def __call__(self, x, y) -> int:
        x = Fraction(x)
        y = Fraction(y)
        if x == 0 or y == 0:
            raise ValueError("symbols are defined on nonzero arguments")
        a = self.valuation(x)
        b = self.valuation(y)
        ux = self._unit_mod_p(x)
        uy = self._unit_mod_p(y)
        sign = self.p - 1 if (a * b) % 2 == 1 else 1
        val = (sign * pow(ux, b, self.p) * pow(uy, -a, self.p)) % self.p
        return val

    def __repr__(self):
        return "TameSymbol(p=%d)" % self.p


# ---------------------------------------------------------------------------
# relation checking

@dataclass
class RelationRecord:
    name: str
    checked: int
    failures: list

    @property
    def ok(self) -> bool:
        return not self.failures


SYMPLECTIC_RELATIONS = ("cocycle", "one_one", "inverse_inverse",
                        "minus_shift", "one_minus_shift")
NONSYMPLECTIC_RELATIONS = ("cocycle", "minus_shift", "one_minus_shift",
                           "multiplicative")


def _sample_nonzero(rng: random.Random, p: int) -> Fraction:
    # mix p-heavy and p-free numbers so valuations vary
    k = rng.randint(-2, 2)
    num = rng.randint(1, 40) * rng.choice((1, -1))
    den = rng.randint(1, 40)
    x = Fraction(num, den) * Fraction(p) ** k
    return x


def check_symbol_relations(symbol: TameSymbol, names: Sequence[str],
                           samples: int = 100, seed: int = 0):
    """Sweep the named symbol relations on random nonzero rationals.

    Returns one RelationRecord per name; failures carry the witness tuple.
    """
    rng = random.Random(seed)
    p = symbol.p
    records = []
    for name in names:
        checked = 0
        failures = []
        for _ in range(samples):
            x = _sample_nonzero(rng, p)
            y = _sample_nonzero(rng, p)
            z = _sample_nonzero(rng, p)
            if name == "cocycle":
                lhs = (symbol(x, y) * symbol(x * y, z)) % p
                rhs = (symbol(x, y * z) * symbol(y, z)) % p
                witness = (x, y, z)
            elif name == "one_one":
                lhs = symbol(Fraction(1), Fraction(1))
                rhs = 1
                witness = ()
            elif name == "inverse_inverse":
                lhs = symbol(x, y)
                rhs = symbol(1 / x, 1 / y)
                witness = (x, y)
            elif name == "minus_shift":
                lhs = symbol(x, y)
                rhs = symbol(x, -x * y)
                witness = (x, y)
            elif name == "one_minus_shift":
                if x == 1:
                    continue
                lhs = symbol(x, y)
                rhs = symbol(x, (1 - x) * y)
                witness = (x, y)
            elif name == "multiplicative":
                lhs = symbol(x, y * z)
                rhs = (symbol(x, y) * symbol(x, z)) % p
                witness = (x, y, z)
            else:
                raise ValueError("unknown relation %r" % name)
            checked += 1
            if lhs != rhs:
                failures.append((name,) + witness)
        records.append(RelationRecord(name=name, checked=checked, failures=failures))
    return records


def derived_symbol_identities(symbol: TameSymbol, samples: int = 100, seed: int = 0):
    """Identities that follow from the basic relations; checked directly.

    (1, x) = (x, 1) = 1;  (x, y) = (1/y, x);  (x, 1 - x) = 1 for x != 0, 1.
    """
    rng = random.Random(seed)
    records = []
    for name in ("left_one", "right_one", "swap_invert", "steinberg"):
        checked = 0
        failures = []
        for _ in range(samples):
            x = _sample_nonzero(rng, symbol.p)
            y = _sample_nonzero(rng, symbol.p)
            if name == "left_one":
                ok = symbol(Fraction(1), x) == 1
                witness = (x,)
            elif name == "right_one":
                ok = symbol(x, Fraction(1)) == 1
                witness = (x,)
            elif name == "swap_invert":
                ok = symbol(x, y) == symbol(1 / y, x)
                witness = (x, y)
            else:
                if x in (0, 1):
                    continue
                ok = symbol(x, 1 - x) == 1
                witness = (x,)
            checked += 1
            if not ok:
                failures.append((name,) + witness)
        records.append(RelationRecord(name=name, checked=checked, failures=failures))
    return records
