"""Exact arithmetic core: rationals, number fields, polynomials, matrices.

Every domain here is exact.  Elements of different domains never mix
implicitly; converting a rational into a bigger ring is always an explicit
call (``field.from_rational``, ``poly_eval``, ...).  Matrices require all
entries to live in one domain and complain loudly otherwise.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Sequence


class DomainMismatchError(TypeError):
    """Raised when elements of different exact domains are combined."""


class SingularMatrixError(ValueError):
    """Raised when inverting a matrix whose determinant is not a unit."""

    def __init__(self, message, determinant=None):
        super().__init__(message)
        self.determinant = determinant


class NotAUnitError(ValueError):
    """Raised when a ring element has no multiplicative inverse."""


class UnassignedVariableError(ValueError):
    """Raised when polynomial evaluation misses a variable binding."""


# ---------------------------------------------------------------------------
# univariate polynomials over Q, ascending coefficient tuples (internal)

def _ptrim(cs):
    n = len(cs)
    while n > 0 and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


def _padd(a, b):
    n = max(len(a), len(b))
    return _ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0)
                   for i in range(n)])


def _pscale(a, c):
    if c == 0:
        return ()
    return tuple(x * c for x in a)


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _ptrim(out)


def _pdivmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and _ptrim(r):
        r = list(_ptrim(r))
        if len(r) < len(b):
            break
        c = r[-1] / lead
        d = len(r) - len(b)
        q[d] = c
        for i, y in enumerate(b):
            r[d + i] -= c * y
        r = r[:-1]
    return _ptrim(q), _ptrim(r)


def _pxgcd(a, b):
    # returns (g, s, t) with s*a + t*b = g
    r0, r1 = a, b
    s0, s1 = (Fraction(1),), ()
    t0, t1 = (), (Fraction(1),)
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _padd(s0, _pneg(_pmul(q, s1)))
        t0, t1 = t1, _padd(t0, _pneg(_pmul(q, t1)))
    return r0, s0, t0


def _pneg(a):
    return tuple(-x for x in a)


def _peval(a, x):
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# number fields

class NumberField:
    """Field Q(w) for w a root of a monic integer polynomial with no rational root.

    The defining polynomial is given by its integer coefficients in ascending
    order, e.g. ``(-2, 0, 1)`` for w^2 - 2.  For degree <= 3 the no-rational-root
    screen is a complete irreducibility proof; beyond that irreducibility is the
    caller's contract.
    """

    def __init__(self, name: str, minpoly: Sequence[int]):
        coeffs = tuple(int(c) for c in minpoly)
        if len(coeffs) < 2:
            raise ValueError("defining polynomial must have degree >= 1")
        if coeffs[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        self.name = name
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1
        if self.degree >= 2:
            for root in self._integer_root_candidates():
                if _peval(tuple(Fraction(c) for c in coeffs), root) == 0:
                    raise ValueError(
                        "defining polynomial has rational root %s, not irreducible" % root)
        self._minpoly_q = tuple(Fraction(c) for c in coeffs)

    def _integer_root_candidates(self):
        a0 = self.minpoly[0]
        if a0 == 0:
            yield Fraction(0)
            return
        n = abs(a0)
        for d in range(1, n + 1):
            if n % d == 0:
                yield Fraction(d)
                yield Fraction(-d)

    def element(self, coords: Iterable) -> "NumberFieldElement":
        cs = tuple(Fraction(c) for c in coords)
        if len(cs) != self.degree:
            raise ValueError("expected %d coordinates, got %d" % (self.degree, len(cs)))
        return NumberFieldElement(self, cs)

    def from_rational(self, q) -> "NumberFieldElement":
        return self.element((Fraction(q),) + (Fraction(0),) * (self.degree - 1))

    def zero(self) -> "NumberFieldElement":
        return self.from_rational(0)

    def one(self) -> "NumberFieldElement":
        return self.from_rational(1)

    def generator(self) -> "NumberFieldElement":
        cs = [Fraction(0)] * self.degree
        cs[1 if self.degree > 1 else 0] = Fraction(1)
        if self.degree == 1:
            # w = -a0 when m = x + a0
            return self.from_rational(-self.minpoly[0])
        return self.element(cs)

    def __eq__(self, other):
        return (isinstance(other, NumberField)
                and self.name == other.name and self.minpoly == other.minpoly)

    def __hash__(self):
        return hash((self.name, self.minpoly))

    def __repr__(self):
        return "NumberField(%r, %r)" % (self.name, list(self.minpoly))


class NumberFieldElement:
    """Element of a NumberField, stored as coordinates in the power basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: tuple):
        self.field = field
        self.coords = coords

    def _check(self, other):
        if not isinstance(other, NumberFieldElement):
            raise DomainMismatchError(
                "cannot combine number field element with %s; convert explicitly"
                % type(other).__name__)
        if other.field != self.field:
            raise DomainMismatchError(
                "elements of %s and %s do not mix" % (self.field.name, other.field.name))

    def __add__(self, other):
        self._check(other)
        return NumberFieldElement(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return NumberFieldElement(
            self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return NumberFieldElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other):
        self._check(other)
        prod = _pmul(_ptrim(self.coords), _ptrim(other.coords))
        _, rem = _pdivmod(prod, self.field._minpoly_q)
        return self.field.element(
            tuple(rem[i] if i < len(rem) else Fraction(0) for i in range(self.field.degree)))

    def inverse(self) -> "NumberFieldElement":
        a = _ptrim(self.coords)
        if not a:
            raise NotAUnitError("zero has no inverse in %s" % self.field.name)
        g, s, _ = _pxgcd(a, self.field._minpoly_q)
        if len(g) != 1:
            raise NotAUnitError(
                "gcd with the defining polynomial is not constant; field is not a field")
        inv = _pscale(s, 1 / g[0])
        _, rem = _pdivmod(inv, self.field._minpoly_q)
        return self.field.element(
            tuple(rem[i] if i < len(rem) else Fraction(0) for i in range(self.field.degree)))

    def __truediv__(self, other):
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __eq__(self, other):
        if isinstance(other, NumberFieldElement):
            return self.field == other.field and self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.coords))

    def __repr__(self):
        w = self.field.name
        parts = []
        for i, c in enumerate(self.coords):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            elif i == 1:
                parts.append("%s*%s" % (c, w))
            else:
                parts.append("%s*%s^%d" % (c, w, i))
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# multivariate polynomials over Q

class MultiPoly:
    """Multivariate polynomial over Q in canonical form.

    Terms are stored as a map from exponent tuples to nonzero rational
    coefficients.  Binary operations align variable lists by union, so
    polynomials declared over different variable sets combine freely.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: tuple, terms: dict):
        self.variables = variables
        # integral coefficients are kept as plain ints (exact and fast);
        # int and Fraction compare and hash consistently
        self.terms = {}
        for e, c in terms.items():
            if c == 0:
                continue
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            self.terms[e] = c

    # -- constructors -------------------------------------------------------

    @staticmethod
    def constant(value, variables: tuple = ()) -> "MultiPoly":
        c = Fraction(value)
        zero = (0,) * len(variables)
        return MultiPoly(variables, {zero: c} if c != 0 else {})

    @staticmethod
    def variable(name: str) -> "MultiPoly":
        return MultiPoly((name,), {(1,): Fraction(1)})

    @staticmethod
    def variables_in(*names: str):
        """Generators sharing one variable tuple (keeps alignment cheap)."""
        vs = tuple(names)
        gens = []
        for i in range(len(vs)):
            e = [0] * len(vs)
            e[i] = 1
            gens.append(MultiPoly(vs, {tuple(e): Fraction(1)}))
        return gens

    # -- alignment -----------------------------------------------------------

    def _aligned(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            raise DomainMismatchError(
                "cannot combine polynomial with %s" % type(other).__name__)
        if self.variables == other.variables:
            return self, other
        merged = tuple(dict.fromkeys(self.variables + other.variables))
        return self._remap(merged), other._remap(merged)

    def _remap(self, merged):
        if merged == self.variables:
            return self
        pos = [merged.index(v) for v in self.variables]
        terms = {}
        for e, c in self.terms.items():
            ne = [0] * len(merged)
            for p, k in zip(pos, e):
                ne[p] = k
            terms[tuple(ne)] = c
        return MultiPoly(merged, terms)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        a, b = self._aligned(other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, Fraction(0)) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly(a.variables, terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        a, b = self._aligned(other)
        if not a.terms or not b.terms:
            return MultiPoly(a.variables, {})
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, Fraction(0)) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return MultiPoly(a.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise NotAUnitError("negative powers of polynomials are not defined")
        result = MultiPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant: %s" % self)
        return Fraction(next(iter(self.terms.values()), 0))

    def degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def coefficient(self, monomial: dict) -> Fraction:
        e = tuple(monomial.get(v, 0) for v in self.variables)
        for v in monomial:
            if v not in self.variables and monomial[v] != 0:
                return Fraction(0)
        return self.terms.get(e, Fraction(0))

    def derivative(self, var: str) -> "MultiPoly":
        if var not in self.variables:
            return MultiPoly(self.variables, {})
        i = self.variables.index(var)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return MultiPoly(self.variables, terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(other, self.variables)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self):
        # hash ignores unused variables so it matches alignment-based equality
        used = [i for i in range(len(self.variables))
                if any(e[i] for e in self.terms)]
        names = tuple(self.variables[i] for i in used)
        items = frozenset(
            (tuple(e[i] for i in used), c) for e, c in self.terms.items())
        return hash((names, items))

    def _sorted_terms(self):
        # graded lexicographic, highest first
        return sorted(self.terms.items(), key=lambda ec: (-sum(ec[0]), tuple(-k for k in ec[0])))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self._sorted_terms():
            factors = []
            for v, k in zip(self.variables, e):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append("%s^%d" % (v, k))
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append("%s*%s" % (c, "*".join(factors)))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def poly_eval(p: MultiPoly, point: dict):
    """Evaluate ``p`` at ``point``, a map name -> value.

    All values must lie in one exact domain; rational coefficients are carried
    into that domain explicitly, so this is the canonical evaluation map
    Q[X1..Xn] -> target ring.
    """
    missing = [v for v in p.variables
               if v not in point and any(e[p.variables.index(v)] for e in p.terms)]
    if missing:
        raise UnassignedVariableError("no value assigned to variable %r" % missing[0])
    values = [point.get(v) for v in p.variables]
    sample = None
    for v in values:
        if v is None:
            continue
        v = Fraction(v) if isinstance(v, int) else v
        if sample is None:
            sample = v
        elif domain_key(v) != domain_key(sample):
            raise DomainMismatchError("point values live in different domains")
    if sample is None:
        sample = Fraction(0)
    acc = None
    for e, c in p.terms.items():
        term = scalar_into(c, sample)
        for v, k in zip(values, e):
            if k == 0:
                continue
            v = Fraction(v) if isinstance(v, int) else v
            term = term * (v ** k)
        acc = term if acc is None else acc + term
    if acc is None:
        return zero_like(sample)
    return acc


# ---------------------------------------------------------------------------
# expression parsing (input files)

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_polynomial(text: str, variables=None) -> MultiPoly:
    """Parse an integer/rational polynomial expression like ``X^3 - Y^2``.

    ``^`` means exponentiation.  Only +, -, *, /, integer literals and
    variable names are allowed; division must be by a nonzero integer.
    """
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ValueError("cannot parse polynomial %r: %s" % (text, exc)) from None

    def build(node):
        if isinstance(node, ast.Expression):
            return build(node.body)
        if isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
            left, right = build(node.left), build(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Pow):
                if not isinstance(right, MultiPoly) or not right.is_constant():
                    raise ValueError("exponent must be a constant in %r" % text)
                n = right.constant_value()
                if n.denominator != 1 or n < 0:
                    raise ValueError("exponent must be a nonnegative integer in %r" % text)
                return left ** int(n)
            # division: by a nonzero constant only
            if not isinstance(right, MultiPoly) or not right.is_constant():
                raise ValueError("division only by constants in %r" % text)
            c = right.constant_value()
            if c == 0:
                raise ValueError("division by zero in %r" % text)
            return left * Fraction(1, 1) * (1 / c)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = build(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.Name):
            if variables is not None and node.id not in variables:
                raise ValueError("unknown variable %r in %r" % (node.id, text))
            return MultiPoly.variable(node.id)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return MultiPoly.constant(node.value)
        raise ValueError("disallowed syntax in polynomial %r" % text)

    return build(tree)


# ---------------------------------------------------------------------------
# generic ring-element helpers

def domain_key(x):
    """A comparable tag identifying the exact domain an element lives in."""
    if isinstance(x, Fraction):
        return ("Q",)
    if isinstance(x, NumberFieldElement):
        return ("NF", x.field.name, x.field.minpoly)
    if isinstance(x, MultiPoly):
        return ("QPoly",)
    key = getattr(x, "_domain_key", None)
    if key is not None:
        return key()
    raise DomainMismatchError("unsupported element type %s" % type(x).__name__)


def is_field_element(x) -> bool:
    return isinstance(x, (Fraction, NumberFieldElement))


def zero_like(x):
    if isinstance(x, Fraction):
        return Fraction(0)
    if isinstance(x, NumberFieldElement):
        return x.field.zero()
    if isinstance(x, MultiPoly):
        return MultiPoly(x.variables, {})
    maker = getattr(x, "_zero_like", None)
    if maker is not None:
        return maker()
    raise DomainMismatchError("unsupported element type %s" % type(x).__name__)


def one_like(x):
    if isinstance(x, Fraction):
        return Fraction(1)
    if isinstance(x, NumberFieldElement):
        return x.field.one()
    if isinstance(x, MultiPoly):
        return MultiPoly.constant(1, x.variables)
    maker = getattr(x, "_one_like", None)
    if maker is not None:
        return maker()
    raise DomainMismatchError("unsupported element type %s" % type(x).__name__)


def scalar_into(c, sample):
    """Carry a rational scalar into the domain of ``sample`` (explicit map)."""
    c = Fraction(c)
    if isinstance(sample, Fraction):
        return c
    if isinstance(sample, NumberFieldElement):
        return sample.field.from_rational(c)
    if isinstance(sample, MultiPoly):
        return MultiPoly.constant(c, sample.variables)
    maker = getattr(sample, "_scalar_into", None)
    if maker is not None:
        return maker(c)
    raise DomainMismatchError("unsupported element type %s" % type(sample).__name__)


def is_zero(x) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    if isinstance(x, (NumberFieldElement, MultiPoly)):
        return x.is_zero()
    probe = getattr(x, "is_zero", None)
    if probe is not None:
        return probe()
    raise DomainMismatchError("unsupported element type %s" % type(x).__name__)


def ring_inv(x):
    """Multiplicative inverse in the element's own domain, or NotAUnitError."""
    if isinstance(x, Fraction):
        if x == 0:
            raise NotAUnitError("zero is not a unit")
        return 1 / x
    if isinstance(x, NumberFieldElement):
        return x.inverse()
    if isinstance(x, MultiPoly):
        if x.is_constant() and x.constant_value() != 0:
            return MultiPoly.constant(1 / x.constant_value(), x.variables)
        raise NotAUnitError("polynomial %s is not a unit" % x)
    probe = getattr(x, "inverse", None)
    if probe is not None:
        return probe()
    raise DomainMismatchError("unsupported element type %s" % type(x).__name__)


def as_ring_element(x):
    """Normalize plain integers to Fraction; pass ring elements through."""
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, (Fraction, NumberFieldElement, MultiPoly)):
        return x
    if domain_key(x):
        return x
    raise DomainMismatchError("unsupported element type %s" % type(x).__name__)


# ---------------------------------------------------------------------------
# matrices

class Matrix:
    """Immutable dense matrix over a single exact domain.

    Entries are stored row-major.  Construction normalizes plain integers to
    Fraction and rejects mixed domains.
    """

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: tuple):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = entries

    @staticmethod
    def from_rows(rows) -> "Matrix":
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ValueError("matrix needs at least one row and one column")
        ncols = len(rows[0])
        flat = []
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged rows")
            flat.extend(as_ring_element(x) for x in r)
        keys = {domain_key(x) for x in flat}
        if len(keys) == 2 and ("Q",) in keys:
            # integer/rational literals lift into the one larger domain present
            sample = next(x for x in flat if domain_key(x) != ("Q",))
            flat = [scalar_into(x, sample) if isinstance(x, Fraction) else x
                    for x in flat]
        elif len(keys) > 1:
            raise DomainMismatchError("matrix entries live in different domains")
        return Matrix(len(rows), ncols, tuple(flat))

    @staticmethod
    def identity(n: int, like=None) -> "Matrix":
        like = Fraction(1) if like is None else as_ring_element(like)
        one, zero = one_like(like), zero_like(like)
        return Matrix(n, n, tuple(one if i == j else zero
                                  for i in range(n) for j in range(n)))

    @staticmethod
    def zero(nrows: int, ncols: int, like=None) -> "Matrix":
        like = Fraction(0) if like is None else as_ring_element(like)
        z = zero_like(like)
        return Matrix(nrows, ncols, (z,) * (nrows * ncols))

    def entry(self, i: int, j: int):
        return self.entries[i * self.ncols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.ncols:(i + 1) * self.ncols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.ncols + j] for i in range(self.nrows))

    def rows(self):
        return [list(self.row(i)) for i in range(self.nrows)]

    def __add__(self, other):
        self._shape_check(other, same=True)
        return Matrix(self.nrows, self.ncols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other):
        self._shape_check(other, same=True)
        return Matrix(self.nrows, self.ncols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return Matrix(self.nrows, self.ncols, tuple(-a for a in self.entries))

    def _shape_check(self, other, same=False):
        if not isinstance(other, Matrix):
            raise DomainMismatchError("expected a matrix, got %s" % type(other).__name__)
        if same and (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        if not same and self.ncols != other.nrows:
            raise ValueError("inner dimensions differ")

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            other = as_ring_element(other)
            return Matrix(self.nrows, self.ncols,
                          tuple(a * other for a in self.entries))
        self._shape_check(other)
        n, m, p = self.nrows, self.ncols, other.ncols
        out = []
        for i in range(n):
            ri = self.entries[i * m:(i + 1) * m]
            for j in range(p):
                acc = None
                for k in range(m):
                    a = ri[k]
                    if is_zero(a):
                        continue
                    b = other.entries[k * p + j]
                    if is_zero(b):
                        continue
                    prod = a * b
                    acc = prod if acc is None else acc + prod
                out.append(acc if acc is not None else zero_like(self.entries[0]))
        return Matrix(n, p, tuple(out))

    def __rmul__(self, other):
        other = as_ring_element(other)
        return Matrix(self.nrows, self.ncols, tuple(other * a for a in self.entries))

    def scale(self, c):
        c = as_ring_element(c)
        return Matrix(self.nrows, self.ncols, tuple(a * c for a in self.entries))

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows,
                      tuple(self.entry(i, j)
                            for j in range(self.ncols) for i in range(self.nrows)))

    def trace(self):
        if self.nrows != self.ncols:
            raise ValueError("trace of a non-square matrix")
        acc = self.entry(0, 0)
        for i in range(1, self.nrows):
            acc = acc + self.entry(i, i)
        return acc

    def is_identity(self) -> bool:
        if self.nrows != self.ncols:
            return False
        one = one_like(self.entries[0])
        for i in range(self.nrows):
            for j in range(self.ncols):
                e = self.entry(i, j)
                if i == j:
                    if e != one:
                        return False
                elif not is_zero(e):
                    return False
        return True

    def is_zero_matrix(self) -> bool:
        return all(is_zero(e) for e in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        return all(a == b for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((self.nrows, self.ncols, self.entries))

    def __repr__(self):
        return "Matrix(%s)" % "; ".join(
            ", ".join(str(x) for x in self.row(i)) for i in range(self.nrows))

    # -- determinant / inverse ----------------------------------------------

    def det(self):
        """Determinant by memoized cofactor expansion; division-free, any domain."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        zero = zero_like(self.entries[0])
        memo = {}

        def minor(k, colmask):
            if k == n:
                return one_like(self.entries[0])
            key = colmask
            got = memo.get((k, key))
            if got is not None:
                return got
            acc = None
            sign = 1
            for j in range(n):
                bit = 1 << j
                if not (colmask & bit):
                    continue
                a = self.entry(k, j)
                if not is_zero(a):
                    sub = minor(k + 1, colmask & ~bit)
                    term = a * sub if sign > 0 else -(a * sub)
                    acc = term if acc is None else acc + term
                sign = -sign
            acc = zero if acc is None else acc
            memo[(k, key)] = acc
            return acc

        return minor(0, (1 << n) - 1)

    def inv(self) -> "Matrix":
        """Inverse over the entry domain.

        Fails with SingularMatrixError carrying the determinant when the
        determinant is not a unit of the domain.
        """
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        if is_field_element(self.entries[0]):
            return self._inv_gauss_jordan()
        d = self.det()
        try:
            dinv = ring_inv(d)
        except NotAUnitError:
            raise SingularMatrixError(
                "determinant %s is not a unit" % (d,), determinant=d) from None
        return self._adjugate() * dinv

    def _adjugate(self) -> "Matrix":
        n = self.nrows
        if n == 1:
            return Matrix.identity(1, like=self.entries[0])
        cof = []
        for i in range(n):
            for j in range(n):
                sub = Matrix(n - 1, n - 1, tuple(
                    self.entry(r, c)
                    for r in range(n) if r != i
                    for c in range(n) if c != j))
                d = sub.det()
                cof.append(d if (i + j) % 2 == 0 else -d)
        # adjugate is the transpose of the cofactor matrix
        return Matrix(n, n, tuple(cof[j * n + i] for i in range(n) for j in range(n)))

    def _inv_gauss_jordan(self) -> "Matrix":
        n = self.nrows
        one = one_like(self.entries[0])
        zero = zero_like(self.entries[0])
        work = [list(self.row(i)) + [one if i == j else zero for j in range(n)]
                for i in range(n)]
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if not is_zero(work[r][col]):
                    pivot = r
                    break
            if pivot is None:
                raise SingularMatrixError(
                    "determinant %s is not a unit" % (zero,), determinant=zero)
            work[col], work[pivot] = work[pivot], work[col]
            pv = ring_inv(work[col][col])
            work[col] = [x * pv for x in work[col]]
            for r in range(n):
                if r == col or is_zero(work[r][col]):
                    continue
                f = work[r][col]
                work[r] = [a - f * b for a, b in zip(work[r], work[col])]
        return Matrix(n, n, tuple(work[i][col] for i in range(n)
                                  for col in range(n, 2 * n)))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return a * b


def matinv(m: Matrix) -> Matrix:
    return m.inv()


def rref(m: Matrix):
    """Reduced row echelon form over an exact field domain.

    Returns ``(reduced, rank, nullspace_basis)`` where the nullspace basis is
    a list of coordinate tuples spanning the right kernel.
    """
    if not is_field_element(m.entries[0]):
        raise DomainMismatchError("row reduction needs entries from an exact field")
    nrows, ncols = m.nrows, m.ncols
    one = one_like(m.entries[0])
    zero = zero_like(m.entries[0])
    work = [list(m.row(i)) for i in range(nrows)]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if not is_zero(work[i][col]):
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        pv = ring_inv(work[r][col])
        work[r] = [x * pv for x in work[r]]
        for i in range(nrows):
            if i == r or is_zero(work[i][col]):
                continue
            f = work[i][col]
            work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    rank = len(pivots)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * ncols
        vec[fc] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -work[i][fc]
        basis.append(tuple(vec))
    reduced = Matrix(nrows, ncols, tuple(x for row in work for x in row))
    return reduced, rank, basis


def column_space_rank(vectors, like=None) -> int:
    """Rank of the span of coordinate tuples (helper for dimension counts)."""
    vectors = [tuple(as_ring_element(x) for x in v) for v in vectors]
    if not vectors:
        return 0
    m = Matrix.from_rows(vectors)
    _, rank, _ = rref(m)
    return rank


# domain descriptors used by the truncated-algebra layer ---------------------

class RationalDomain:
    """Descriptor for the base field Q."""

    name = "Q"

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise DomainMismatchError("cannot coerce %s into Q" % type(x).__name__)

    def inv(self, x):
        if x == 0:
            raise NotAUnitError("zero is not a unit")
        return 1 / x

    def is_field(self):
        return True

    def key(self):
        return ("Q",)

    def __eq__(self, other):
        return isinstance(other, RationalDomain)

    def __hash__(self):
        return hash("RationalDomain")

    def __repr__(self):
        return "QQ"


QQ = RationalDomain()


class PolyDomain:
    """Descriptor for Q[x1, x2, ...] as a coefficient domain."""

    def __init__(self, *variables: str):
        self.variables = tuple(variables)
        self.name = "Q[%s]" % ", ".join(self.variables)

    def zero(self):
        return MultiPoly(self.variables, {})

    def one(self):
        return MultiPoly.constant(1, self.variables)

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return MultiPoly.constant(x, self.variables)
        if isinstance(x, MultiPoly):
            return x
        raise DomainMismatchError("cannot coerce %s into %s" % (type(x).__name__, self.name))

    def inv(self, x):
        return ring_inv(self.coerce(x))

    def is_field(self):
        return False

    def key(self):
        return ("QPoly",)

    def __eq__(self, other):
        return isinstance(other, PolyDomain)

    def __hash__(self):
        return hash("PolyDomain")

    def __repr__(self):
        return self.name


class NumberFieldDomain:
    """Descriptor wrapping a NumberField as a coefficient domain."""

    def __init__(self, field: NumberField):
        self.field = field
        self.name = "Q(%s)" % field.name

    def zero(self):
        return self.field.zero()

    def one(self):
        return self.field.one()

    def coerce(self, x):
        if isinstance(x, (int, Fraction)):
            return self.field.from_rational(x)
        if isinstance(x, NumberFieldElement) and x.field == self.field:
            return x
        raise DomainMismatchError("cannot coerce %s into %s" % (type(x).__name__, self.name))

    def inv(self, x):
        return self.coerce(x).inverse()

    def is_field(self):
        return True

    def key(self):
        return ("NF", self.field.name, self.field.minpoly)

    def __eq__(self, other):
        return isinstance(other, NumberFieldDomain) and self.field == other.field

    def __hash__(self):
        return hash(("NumberFieldDomain", self.field))

    def __repr__(self):
        return self.name
