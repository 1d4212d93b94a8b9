"""Central extensions and finite-dimensional commutative algebra structure.

Three layers:

* the trace-form pairing on traceless matrices (Killing form via ad-traces)
  and the Heisenberg-like group V = g x g x K whose group law twists the
  central coordinate by f(a1, b2) - f(a2, b1);
* generic central extensions of a group by K^m given by a 2-cocycle, with
  lift-independence of commutators and the obstruction homomorphism that
  decides when sections over two direct factors merge into one;
* decomposition of a finite-dimensional commutative unital Q-algebra into
  local factors, reported as truncated polynomial rings K[e]/(e^d) when the
  maximal ideal is principal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional, Sequence

from .kernel import (
    Matrix,
    _pdivmod,
    _peval,
    _pmul,
    _ptrim,
    _pxgcd,
    rref,
)
from .rings import SumAlgebra, TruncAlgebra


# ---------------------------------------------------------------------------
# traceless matrices and the Killing form

class TracelessMatrices:
    """The Lie algebra of traceless n x n rational matrices."""

    def __init__(self, n: int):
        if n < 2:
            raise ValueError("need n >= 2")
        self.n = n
        self.dim = n * n - 1
        self._basis = self._build_basis()

    def _build_basis(self):
        n = self.n
        out = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                out.append(Matrix.from_rows(
                    [[1 if (a, b) == (i, j) else 0 for b in range(n)] for a in range(n)]))
        for k in range(n - 1):
            rows = [[0] * n for _ in range(n)]
            rows[k][k] = 1
            rows[k + 1][k + 1] = -1
            out.append(Matrix.from_rows(rows))
        return tuple(out)

    def basis(self):
        return self._basis

    def contains(self, x: Matrix) -> bool:
        return (x.nrows == x.ncols == self.n) and x.trace() == 0

    def coords(self, x: Matrix) -> tuple:
        """Coordinates in the basis (E_ij for i != j, then diagonal steps)."""
        if not self.contains(x):
            raise ValueError("matrix is not traceless of size %d" % self.n)
        n = self.n
        out = [x.entry(i, j) for i in range(n) for j in range(n) if i != j]
        partial = Fraction(0)
        for k in range(n - 1):
            partial += x.entry(k, k)
            out.append(partial)
        return tuple(out)

    def from_coords(self, coords: Sequence) -> Matrix:
        acc = Matrix.zero(self.n, self.n)
        for c, b in zip(coords, self._basis):
            acc = acc + b.scale(Fraction(c))
        return acc

    def bracket(self, x: Matrix, y: Matrix) -> Matrix:
        return x * y - y * x

    def random_element(self, rng, lo=-3, hi=3) -> Matrix:
        return self.from_coords([Fraction(rng.randint(lo, hi)) for _ in range(self.dim)])


def ad_matrix(lie: TracelessMatrices, x: Matrix) -> Matrix:
    """The matrix of ad(x) = [x, -] in the chosen basis."""
    cols = [lie.coords(lie.bracket(x, b)) for b in lie.basis()]
    return Matrix.from_rows([[cols[j][i] for j in range(lie.dim)]
                             for i in range(lie.dim)])


def killing_form(lie: TracelessMatrices, x: Matrix, y: Matrix) -> Fraction:
    """trace(ad x ad y); for these algebras it equals 2n * trace(xy)."""
    return (ad_matrix(lie, x) * ad_matrix(lie, y)).trace()


def killing_gram(lie: TracelessMatrices) -> Matrix:
    """Gram matrix of the ad-trace pairing on the chosen basis."""
    ads = [ad_matrix(lie, b) for b in lie.basis()]
    return Matrix.from_rows([[(ads[i] * ads[j]).trace() for j in range(lie.dim)]
                             for i in range(lie.dim)])


# ---------------------------------------------------------------------------
# Heisenberg-like groups

class HeisenbergLikeGroup:
    """Set g x g x K with product twisting the center by f(a1,b2) - f(a2,b1).

    The commutator of two elements is central with value
    2 (f(a1, b2) - f(a2, b1)), so the group is abelian exactly when the
    pairing f vanishes identically.
    """

    def __init__(self, lie: TracelessMatrices, form: Optional[Callable] = None):
        self.lie = lie
        if form is None:
            # same values as killing_form, with the basis Gram matrix cached
            gram = killing_gram(lie)

            def form(x, y, _g=gram):
                cx = lie.coords(x)
                cy = lie.coords(y)
                total = Fraction(0)
                for i, a in enumerate(cx):
                    if a == 0:
                        continue
                    for j, b in enumerate(cy):
                        if b != 0:
                            total += a * b * _g.entry(i, j)
                return total
        self.form = form

    def element(self, a: Matrix, b: Matrix, c) -> "HeisenbergElement":
        if not (self.lie.contains(a) and self.lie.contains(b)):
            raise ValueError("components must lie in the algebra")
        return HeisenbergElement(self, a, b, Fraction(c))

    def identity(self) -> "HeisenbergElement":
        z = Matrix.zero(self.lie.n, self.lie.n)
        return HeisenbergElement(self, z, z, Fraction(0))


class HeisenbergElement:
    __slots__ = ("group", "a", "b", "c")

    def __init__(self, group, a, b, c):
        self.group = group
        self.a = a
        self.b = b
        self.c = c

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        f = self.group.form
        c = self.c + other.c + f(self.a, other.b) - f(other.a, self.b)
        return HeisenbergElement(self.group, self.a + other.a, self.b + other.b, c)

    def inverse(self) -> "HeisenbergElement":
        return HeisenbergElement(self.group, -self.a, -self.b, -self.c)

    def commutator(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return self * other * self.inverse() * other.inverse()

    def is_identity(self) -> bool:
        return self.a.is_zero_matrix() and self.b.is_zero_matrix() and self.c == 0

    def __eq__(self, other):
        if not isinstance(other, HeisenbergElement):
            return NotImplemented
        return (self.a, self.b, self.c) == (other.a, other.b, other.c)

    def __hash__(self):
        return hash((self.a, self.b, self.c))

    def __repr__(self):
        return "HeisenbergElement(a=%r, b=%r, c=%s)" % (self.a, self.b, self.c)


def heisenberg_commutator_value(group: HeisenbergLikeGroup, g1, g2) -> Fraction:
    """Central value 2 (f(a1, b2) - f(a2, b1)) of the commutator [g1, g2]."""
    f = group.form
    return 2 * (f(g1.a, g2.b) - f(g2.a, g1.b))


@dataclass
class SplitnessVerdict:
    status: str  # "SPLIT" | "NON_SPLIT" | "INCONCLUSIVE"
    witness: Optional[tuple] = None
    section_checked: int = 0


def splitness_verdict(group: HeisenbergLikeGroup) -> SplitnessVerdict:
    """Decide whether the group is a direct product g x g x K.

    The pairing is swept over all basis pairs; bilinearity makes the sweep
    exhaustive.  A nonzero value yields a non-central-free commutator witness;
    a zero sweep certifies the section (a, b) -> (a, b, 0) as an isomorphism.
    """
    basis = group.lie.basis()
    zero = Matrix.zero(group.lie.n, group.lie.n)
    for x, y in itertools.product(basis, repeat=2):
        val = group.form(x, y)
        if val != 0:
            g1 = group.element(x, zero, 0)
            g2 = group.element(zero, y, 0)
            comm = g1.commutator(g2)
            return SplitnessVerdict(status="NON_SPLIT",
                                    witness=(g1, g2, comm.c))
    # certified split: verify the obvious section is a homomorphism on
    # all basis pairs (and that commutators vanish)
    checked = 0
    for x, y in itertools.product(basis, repeat=2):
        s1 = group.element(x, y, 0)
        s2 = group.element(y, x, 0)
        prod = s1 * s2
        if prod.c != 0 or not s1.commutator(s2).is_identity():
            return SplitnessVerdict(status="INCONCLUSIVE", witness=(x, y))
        checked += 1
    return SplitnessVerdict(status="SPLIT", section_checked=checked)


# ---------------------------------------------------------------------------
# cocycle extensions

@dataclass(frozen=True)
class GroupOps:
    """Multiplication, inversion and identity of the base group."""

    mul: Callable
    inv: Callable
    identity: object


class CocycleError(ValueError):
    """Raised when a claimed 2-cocycle fails its defining identity."""


class CocycleExtension:
    """Central extension of a base group by Q^m defined by a 2-cocycle.

    Elements are pairs (g, z) with z a central coordinate tuple, multiplied as
    (g1, z1)(g2, z2) = (g1 g2, z1 + z2 + c(g1, g2)).  The cocycle must be
    normalized: c(e, e) = 0.
    """

    def __init__(self, ops: GroupOps, cocycle: Callable, center_dim: int = 1):
        self.ops = ops
        self.cocycle = cocycle
        self.center_dim = center_dim
        e = ops.identity
        if self._c(e, e) != (Fraction(0),) * center_dim:
            raise CocycleError("cocycle is not normalized at the identity")

    def _c(self, g, h) -> tuple:
        val = self.cocycle(g, h)
        if not isinstance(val, tuple):
            val = (val,)
        if len(val) != self.center_dim:
            raise CocycleError("cocycle value has wrong length")
        return tuple(Fraction(v) for v in val)

    def validate_cocycle(self, samples) -> bool:
        """Check c(g,h) + c(gh,k) = c(g,hk) + c(h,k) on the given triples."""
        mul = self.ops.mul
        for g, h, k in samples:
            lhs = _tadd(self._c(g, h), self._c(mul(g, h), k))
            rhs = _tadd(self._c(g, mul(h, k)), self._c(h, k))
            if lhs != rhs:
                raise CocycleError("cocycle identity fails at %r" % ((g, h, k),))
        return True

    def element(self, g, z=None) -> "ExtensionElement":
        if z is None:
            z = (Fraction(0),) * self.center_dim
        if not isinstance(z, tuple):
            z = (z,)
        return ExtensionElement(self, g, tuple(Fraction(v) for v in z))

    def identity(self) -> "ExtensionElement":
        return self.element(self.ops.identity)


def _tadd(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _tneg(a: tuple) -> tuple:
    return tuple(-x for x in a)


class ExtensionElement:
    __slots__ = ("ext", "g", "z")

    def __init__(self, ext, g, z):
        self.ext = ext
        self.g = g
        self.z = z

    def __mul__(self, other: "ExtensionElement") -> "ExtensionElement":
        ext = self.ext
        g = ext.ops.mul(self.g, other.g)
        z = _tadd(_tadd(self.z, other.z), ext._c(self.g, other.g))
        return ExtensionElement(ext, g, z)

    def inverse(self) -> "ExtensionElement":
        ext = self.ext
        ginv = ext.ops.inv(self.g)
        z = _tadd(_tneg(self.z), _tneg(ext._c(self.g, ginv)))
        return ExtensionElement(ext, ginv, z)

    def commutator(self, other: "ExtensionElement") -> "ExtensionElement":
        return self * other * self.inverse() * other.inverse()

    def is_identity(self) -> bool:
        return self.g == self.ext.ops.identity and all(v == 0 for v in self.z)

    def __eq__(self, other):
        if not isinstance(other, ExtensionElement):
            return NotImplemented
        return self.g == other.g and self.z == other.z

    def __repr__(self):
        return "ExtensionElement(%r, %r)" % (self.g, self.z)


@dataclass
class LiftInvarianceReport:
    ok: bool
    commutator_center: Optional[tuple]
    checked: int


def commutator_lift_invariance(ext: CocycleExtension, g, h,
                               shifts: Sequence[tuple]) -> LiftInvarianceReport:
    """Commutators of lifts do not depend on the chosen central shifts."""
    base = ext.element(g).commutator(ext.element(h))
    checked = 0
    for z1 in shifts:
        for z2 in shifts:
            lifted = ext.element(g, z1).commutator(ext.element(h, z2))
            if lifted != base:
                return LiftInvarianceReport(ok=False, commutator_center=None,
                                            checked=checked)
            checked += 1
    return LiftInvarianceReport(ok=True, commutator_center=base.z, checked=checked)


@dataclass
class ProductSplittingReport:
    split: bool
    phi_hom_checked: int
    psi_checked: int
    witness: Optional[tuple] = None
    psi_additive_ok: Optional[bool] = None
    section_checked: int = 0


def product_splitting(ext: CocycleExtension, phi1: Callable, phi2: Callable,
                      samples1: Sequence, samples2: Sequence) -> ProductSplittingReport:
    """Try to merge sections over two commuting factors into one section.

    phi1 and phi2 lift elements of the two factors into the extension.  The
    obstruction is psi_a(b) = [phi1(a), phi2(b)], central whenever the factors
    commute downstairs.  If it vanishes on all samples the combined map
    (a, b) -> phi1(a) phi2(b) is verified multiplicative; otherwise psi is
    returned with a witness, and its additivity in b is verified.
    """
    mul = ext.ops.mul
    phi_checked = 0
    for phi, samples in ((phi1, samples1), (phi2, samples2)):
        for a in samples:
            for b in samples:
                if phi(a) * phi(b) != phi(mul(a, b)):
                    raise ValueError("section is not a homomorphism at %r" % ((a, b),))
                phi_checked += 1

    psi_values = {}
    psi_checked = 0
    witness = None
    for a in samples1:
        for b in samples2:
            comm = phi1(a).commutator(phi2(b))
            if comm.g != ext.ops.identity:
                raise ValueError("factors do not commute downstairs at %r" % ((a, b),))
            psi_values[(a, b)] = comm.z
            psi_checked += 1
            if witness is None and any(v != 0 for v in comm.z):
                witness = (a, b, comm.z)

    if witness is None:
        section_checked = 0
        for a1, a2 in itertools.product(samples1, repeat=2):
            for b1, b2 in itertools.product(samples2, repeat=2):
                s1 = phi1(a1) * phi2(b1)
                s2 = phi1(a2) * phi2(b2)
                if s1 * s2 != phi1(mul(a1, a2)) * phi2(mul(b1, b2)):
                    raise ValueError("merged section failed at %r" % ((a1, b1, a2, b2),))
                section_checked += 1
        return ProductSplittingReport(split=True, phi_hom_checked=phi_checked,
                                      psi_checked=psi_checked,
                                      section_checked=section_checked)

    # non-split: the obstruction must be additive in its second argument
    additive = True
    for a in samples1:
        for b1, b2 in itertools.product(samples2, repeat=2):
            lhs = phi1(a).commutator(phi2(mul(b1, b2))).z
            rhs = _tadd(psi_values[(a, b1)], psi_values[(a, b2)])
            if lhs != rhs:
                additive = False
    return ProductSplittingReport(split=False, phi_hom_checked=phi_checked,
                                  psi_checked=psi_checked, witness=witness,
                                  psi_additive_ok=additive)


# ---------------------------------------------------------------------------
# finite-dimensional commutative algebras

class AlgebraAxiomError(ValueError):
    """Raised when structure constants violate the declared axioms."""


class IdempotentLiftingError(ArithmeticError):
    """Raised when a residue field is not rational, blocking the splitting."""


class FinDimAlgebra:
    """Commutative associative unital algebra over Q with a fixed basis.

    The structure tensor c[i][j][k] gives basis products
    b_i * b_j = sum_k c[i][j][k] b_k; elements are coordinate tuples.
    Commutativity, associativity, and the unit law are verified at
    construction.
    """

    def __init__(self, names: Sequence[str], tensor, unit: Sequence):
        self.names = tuple(names)
        self.dim = len(self.names)
        n = self.dim
        self.tensor = tuple(tuple(tuple(Fraction(c) for c in row) for row in plane)
                            for plane in tensor)
        if len(self.tensor) != n or any(len(p) != n for p in self.tensor) or any(
                len(r) != n for p in self.tensor for r in p):
            raise AlgebraAxiomError("structure tensor must be %d^3" % n)
        self.unit = tuple(Fraction(u) for u in unit)
        if len(self.unit) != n:
            raise AlgebraAxiomError("unit vector has wrong length")
        self._validate()

    # -- validation -------------------------------------------------------------

    def _validate(self):
        n = self.dim
        es = [tuple(Fraction(1) if i == k else Fraction(0) for i in range(n))
              for k in range(n)]
        for i in range(n):
            for j in range(i, n):
                if self.mult(es[i], es[j]) != self.mult(es[j], es[i]):
                    raise AlgebraAxiomError(
                        "not commutative at basis pair (%d, %d)" % (i, j))
        for i in range(n):
            if self.mult(self.unit, es[i]) != es[i]:
                raise AlgebraAxiomError("unit fails on basis element %d" % i)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = self.mult(self.mult(es[i], es[j]), es[k])
                    rhs = self.mult(es[i], self.mult(es[j], es[k]))
                    if lhs != rhs:
                        raise AlgebraAxiomError(
                            "not associative at basis triple (%d, %d, %d)" % (i, j, k))

    # -- arithmetic ---------------------------------------------------------------

    def mult(self, x: Sequence, y: Sequence) -> tuple:
        n = self.dim
        out = [Fraction(0)] * n
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            plane = self.tensor[i]
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                f = xi * yj
                row = plane[j]
                for k in range(n):
                    if row[k] != 0:
                        out[k] += f * row[k]
        return tuple(out)

    def power(self, x: Sequence, m: int) -> tuple:
        acc = self.unit
        for _ in range(m):
            acc = self.mult(acc, x)
        return acc

    def zero(self) -> tuple:
        return (Fraction(0),) * self.dim

    def basis_vector(self, k: int) -> tuple:
        return tuple(Fraction(1) if i == k else Fraction(0) for i in range(self.dim))

    # -- constructors ----------------------------------------------------------------

    @staticmethod
    def from_univariate_quotient(coeffs: Sequence, var: str = "X") -> "FinDimAlgebra":
        """Q[X]/(f) for monic f given by ascending coefficients."""
        f = _ptrim(tuple(Fraction(c) for c in coeffs))
        if not f or f[-1] != 1:
            raise ValueError("defining polynomial must be monic")
        n = len(f) - 1
        if n < 1:
            raise ValueError("defining polynomial must have degree >= 1")
        names = ["1"] + ["%s^%d" % (var, k) if k > 1 else var for k in range(1, n)]
        tensor = []
        for i in range(n):
            plane = []
            for j in range(n):
                prod = [Fraction(0)] * (i + j) + [Fraction(1)]
                _, rem = _pdivmod(tuple(prod), f)
                plane.append(tuple(rem[k] if k < len(rem) else Fraction(0)
                                   for k in range(n)))
            tensor.append(tuple(plane))
        unit = tuple(Fraction(1) if k == 0 else Fraction(0) for k in range(n))
        return FinDimAlgebra(names, tuple(tensor), unit)

    @staticmethod
    def truncated(d: int) -> "FinDimAlgebra":
        """K[e]/(e^d) as a structure-constant table."""
        return FinDimAlgebra.from_univariate_quotient(
            [Fraction(0)] * d + [Fraction(1)], var="e")

    @staticmethod
    def two_generator_square_zero() -> "FinDimAlgebra":
        """K[u, v] with u^2 = v^2 = uv = 0 (maximal ideal needs 2 generators)."""
        names = ("1", "u", "v")
        z = (Fraction(0),) * 3
        e0 = (Fraction(1), Fraction(0), Fraction(0))
        e1 = (Fraction(0), Fraction(1), Fraction(0))
        e2 = (Fraction(0), Fraction(0), Fraction(1))
        tensor = (
            (e0, e1, e2),
            (e1, z, z),
            (e2, z, z),
        )
        return FinDimAlgebra(names, tensor, e0)

    # -- serialization ------------------------------------------------------------------

    def to_lines(self):
        lines = ["dim %d" % self.dim,
                 "basis %s" % " ".join(self.names),
                 "unit %s" % " ".join(str(u) for u in self.unit)]
        for i in range(self.dim):
            for j in range(self.dim):
                lines.append("%s*%s = %s" % (
                    self.names[i], self.names[j],
                    " ".join(str(c) for c in self.tensor[i][j])))
        return lines

    def save(self, path):
        Path(path).write_text("\n".join(self.to_lines()) + "\n")

    @staticmethod
    def parse(text: str) -> "FinDimAlgebra":
        dim = None
        names = None
        unit = None
        products = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("dim "):
                dim = int(line.split()[1])
            elif line.startswith("basis "):
                names = tuple(line.split()[1:])
            elif line.startswith("unit "):
                unit = tuple(Fraction(tok) for tok in line.split()[1:])
            elif "=" in line and "*" in line:
                head, tail = line.split("=", 1)
                a, b = (s.strip() for s in head.split("*", 1))
                products[(a, b)] = tuple(Fraction(tok) for tok in tail.split())
            else:
                raise ValueError("cannot parse line %r" % raw)
        if dim is None or names is None or unit is None:
            raise ValueError("file must declare dim, basis, and unit")
        if len(names) != dim:
            raise ValueError("basis names do not match the declared dimension")
        tensor = []
        for a in names:
            plane = []
            for b in names:
                if (a, b) not in products:
                    raise ValueError("missing product line for %s*%s" % (a, b))
                vec = products[(a, b)]
                if len(vec) != dim:
                    raise ValueError("product %s*%s has wrong length" % (a, b))
                plane.append(vec)
            tensor.append(tuple(plane))
        return FinDimAlgebra(names, tuple(tensor), unit)

    @staticmethod
    def load(path) -> "FinDimAlgebra":
        return FinDimAlgebra.parse(Path(path).read_text())


# ---------------------------------------------------------------------------
# decomposition into local factors

@dataclass
class LocalFactor:
    idempotent: tuple
    dim: int
    principal: bool
    trunc_order: Optional[int] = None
    generator: Optional[tuple] = None
    basis: tuple = ()
    maximal_ideal_generators: Optional[int] = None

    def describe(self) -> str:
        if self.principal:
            return "K[e]/(e^%d)" % self.trunc_order
        return "NOT-PRINCIPAL(dim m/m^2 = %d)" % self.maximal_ideal_generators


@dataclass
class DecompositionReport:
    algebra: FinDimAlgebra
    radical_dim: int
    factors: list = field(default_factory=list)

    @property
    def all_principal(self) -> bool:
        return all(f.principal for f in self.factors)

    def describe(self) -> str:
        return " (+) ".join(f.describe() for f in self.factors)


def _reduce_against(pivots, vec):
    """Reduce vec against the running echelon rows; return the remainder."""
    v = list(vec)
    for lead, row in pivots:
        if v[lead] != 0:
            f = v[lead]
            for i in range(len(v)):
                v[i] -= f * row[i]
    return tuple(v)


def _add_to_span(pivots, vec) -> bool:
    """Try to extend the echelon basis; True if vec was independent."""
    r = _reduce_against(pivots, vec)
    for lead, x in enumerate(r):
        if x != 0:
            pivots.append((lead, tuple(v / x for v in r)))
            return True
    return False


def _span_rank(vectors) -> int:
    pivots = []
    for v in vectors:
        _add_to_span(pivots, v)
    return len(pivots)


def _independent_subset(vectors):
    pivots = []
    chosen = []
    for v in vectors:
        if _add_to_span(pivots, v):
            chosen.append(v)
    return chosen


def _solve_coords(basis_vectors, target):
    """Write target as a combination of basis_vectors (assumed independent)."""
    n = len(target)
    m = len(basis_vectors)
    rows = [[basis_vectors[j][i] for j in range(m)] + [target[i]] for i in range(n)]
    mat = Matrix.from_rows(rows)
    reduced, rank, _ = rref(mat)
    coords = [Fraction(0)] * m
    r = 0
    for col in range(m):
        if r < mat.nrows and reduced.entry(r, col) == 1 and all(
                reduced.entry(rr, col) == 0 for rr in range(mat.nrows) if rr != r):
            coords[col] = reduced.entry(r, m)
            r += 1
    # consistency: rows beyond the rank must have zero rhs
    for rr in range(r, mat.nrows):
        if reduced.entry(rr, m) != 0:
            raise ArithmeticError("target is outside the span")
    return tuple(coords)


def _rational_roots(poly):
    """All rational roots of a polynomial with Fraction coefficients."""
    poly = _ptrim(poly)
    if len(poly) <= 1:
        return []
    from math import lcm

    denom = lcm(*[c.denominator for c in poly]) if len(poly) > 1 else 1
    ints = [int(c * denom) for c in poly]
    roots = []
    if ints[0] == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]
    if not ints:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(m):
        out = []
        d = 1
        while d * d <= m:
            if m % d == 0:
                out.append(d)
                out.append(m // d)
            d += 1
        return sorted(set(out))

    for p in divisors(a0):
        for q in divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if cand not in roots and _peval(poly, cand) == 0:
                    roots.append(cand)
    return sorted(roots)


class _QuotientView:
    """The semisimple quotient A/rad(A) with explicit projection and section."""

    def __init__(self, algebra: FinDimAlgebra, rad_basis):
        self.algebra = algebra
        n = algebra.dim
        pivots = []
        for v in rad_basis:
            _add_to_span(pivots, v)
        comp = []
        for k in range(n):
            if _add_to_span(pivots, algebra.basis_vector(k)):
                comp.append(algebra.basis_vector(k))
        self.comp = comp
        self.dim = len(comp)
        cols = list(rad_basis) + comp
        m = Matrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)])
        self._minv = m.inv()
        self._nrad = len(rad_basis)

    def project(self, vec) -> tuple:
        col = self._minv * Matrix.from_rows([[v] for v in vec])
        return tuple(col.entry(self._nrad + k, 0) for k in range(self.dim))

    def lift(self, qvec) -> tuple:
        n = self.algebra.dim
        out = [Fraction(0)] * n
        for c, b in zip(qvec, self.comp):
            for i in range(n):
                out[i] += c * b[i]
        return tuple(out)

    def mult(self, x, y) -> tuple:
        return self.project(self.algebra.mult(self.lift(x), self.lift(y)))

    def unit(self) -> tuple:
        return self.project(self.algebra.unit)

    def scale_add(self, c, x, y) -> tuple:
        return tuple(c * a + b for a, b in zip(x, y))


def _block_dim(view: _QuotientView, u) -> int:
    return _span_rank([view.mult(u, view.project(view.algebra.basis_vector(k)))
                       for k in range(view.algebra.dim)])


def _minpoly_on_block(view: _QuotientView, u, y):
    """Minimal polynomial of multiplication by y inside the block u*A."""
    pivots = []
    powers = [u]
    _add_to_span(pivots, u)
    while True:
        nxt = view.mult(powers[-1], y)
        if not _add_to_span(pivots, nxt):
            coords = _solve_coords(powers, nxt)
            poly = [-c for c in coords] + [Fraction(1)]
            return _ptrim(tuple(poly))
        powers.append(nxt)


def _split_block(view: _QuotientView, u):
    """Split an idempotent u using a rational eigenvalue, if any exists."""
    for k in range(view.algebra.dim):
        xbar = view.mult(u, view.project(view.algebra.basis_vector(k)))
        poly = _minpoly_on_block(view, u, xbar)
        if len(poly) <= 2:
            continue
        for lam in _rational_roots(poly):
            lin = (-lam, Fraction(1))
            quo, rem = _pdivmod(poly, lin)
            if _ptrim(rem):
                continue
            g, s, t = _pxgcd(lin, quo)
            if len(g) != 1:
                continue  # repeated factor; cannot separate with this root
            # e = t(y) * quo(y) / g, an idempotent with e = 1 on the lam part
            e_poly = _pmul(t, quo)
            e_poly = tuple(c / g[0] for c in e_poly)
            e = _eval_poly_in_block(view, u, xbar, e_poly)
            if view.mult(e, e) != e:
                raise ArithmeticError("constructed element is not idempotent")
            rest = view.scale_add(Fraction(-1), e, u)
            if all(c == 0 for c in e) or all(c == 0 for c in rest):
                continue
            return [e, rest]
    return None


def _eval_poly_in_block(view: _QuotientView, u, y, poly):
    acc = tuple(Fraction(0) for _ in range(view.dim))
    for c in reversed(poly):
        acc = view.mult(acc, y)
        acc = view.scale_add(c, u, acc)
    return acc


def decompose_algebra(algebra: FinDimAlgebra) -> DecompositionReport:
    """Split a commutative algebra into local factors via lifted idempotents.

    The radical is the kernel of the trace form of the regular representation;
    idempotents of the semisimple quotient are found through rational
    eigenvalues (a non-rational residue field raises IdempotentLiftingError)
    and lifted by the Newton iteration e -> 3e^2 - 2e^3.  Each factor is
    examined for principality of its maximal ideal.
    """
    n = algebra.dim
    # trace form of the regular representation
    left_mult = []
    for i in range(n):
        rows = [[algebra.tensor[i][j][k] for j in range(n)] for k in range(n)]
        left_mult.append(Matrix.from_rows(rows))
    gram = Matrix.from_rows([[(left_mult[i] * left_mult[j]).trace()
                              for j in range(n)] for i in range(n)])
    _, _, rad_basis = rref(gram)
    rad_basis = list(rad_basis)
    view = _QuotientView(algebra, rad_basis)

    blocks = [view.unit()]
    while True:
        new_blocks = []
        changed = False
        for u in blocks:
            if _block_dim(view, u) == 1:
                new_blocks.append(u)
                continue
            split = _split_block(view, u)
            if split is None:
                new_blocks.append(u)
            else:
                new_blocks.extend(split)
                changed = True
        blocks = new_blocks
        if not changed:
            break
    for u in blocks:
        bd = _block_dim(view, u)
        if bd > 1:
            raise IdempotentLiftingError(
                "semisimple block of dimension %d has no rational idempotent "
                "splitting (non-rational residue field)" % bd)

    # lift the idempotents through the radical
    lifted = []
    for u in blocks:
        e = view.lift(u)
        for _ in range(4 * n + 4):
            e2 = algebra.mult(e, e)
            if e2 == e:
                break
            e3 = algebra.mult(e2, e)
            e = tuple(3 * a - 2 * b for a, b in zip(e2, e3))
        else:
            raise ArithmeticError("idempotent lifting did not converge")
        lifted.append(e)
    # orthogonality and completeness of the lifted family
    total = algebra.zero()
    for i, e in enumerate(lifted):
        total = tuple(a + b for a, b in zip(total, e))
        for j in range(i + 1, len(lifted)):
            if any(c != 0 for c in algebra.mult(e, lifted[j])):
                raise ArithmeticError("lifted idempotents are not orthogonal")
    if total != algebra.unit:
        raise ArithmeticError("lifted idempotents do not sum to the unit")

    report = DecompositionReport(algebra=algebra, radical_dim=len(rad_basis))
    for e in sorted(lifted):
        factor_vectors = _independent_subset(
            [algebra.mult(e, algebra.basis_vector(k)) for k in range(n)])
        fdim = len(factor_vectors)
        ideal_vectors = _independent_subset(
            [algebra.mult(e, r) for r in rad_basis])
        mdim = _span_rank(ideal_vectors)
        if mdim == 0:
            report.factors.append(LocalFactor(
                idempotent=e, dim=fdim, principal=True, trunc_order=1,
                generator=None, basis=(e,), maximal_ideal_generators=0))
            continue
        m2_vectors = [algebra.mult(x, y)
                      for x, y in itertools.product(ideal_vectors, repeat=2)]
        m2_rank = _span_rank(m2_vectors)
        embedding_dim = mdim - m2_rank
        if embedding_dim > 1:
            report.factors.append(LocalFactor(
                idempotent=e, dim=fdim, principal=False, basis=tuple(factor_vectors),
                maximal_ideal_generators=embedding_dim))
            continue
        # principal: find a generator g of the maximal ideal, then the powers
        # e, g, g^2, ... form a basis of the factor
        generator = None
        for cand in ideal_vectors:
            pivots = []
            for v in m2_vectors:
                _add_to_span(pivots, v)
            if _add_to_span(pivots, cand):
                generator = cand
                break
        if generator is None:
            raise ArithmeticError("no generator found for a principal ideal")
        powers = [e]
        g = generator
        while any(c != 0 for c in g):
            powers.append(g)
            g = algebra.mult(g, generator)
        if len(powers) != fdim or _span_rank(powers) != fdim:
            raise ArithmeticError("generator powers do not span the factor")
        report.factors.append(LocalFactor(
            idempotent=e, dim=fdim, principal=True, trunc_order=len(powers),
            generator=generator, basis=tuple(powers),
            maximal_ideal_generators=1))
    return report


@dataclass
class ReassemblyCheck:
    sum_algebra: SumAlgebra
    ok: bool
    checked_products: int


def reassemble(report: DecompositionReport) -> ReassemblyCheck:
    """Rebuild a sum of truncated rings and verify the isomorphism on products.

    Only available when every factor is principal.  The factor bases
    (e, g, g^2, ...) map to (1, e, e^2, ...) of K[e]/(e^d); the induced linear
    map is checked to be multiplicative on all basis pairs and to preserve
    the unit.
    """
    if not report.all_principal:
        raise ValueError("reassembly needs all factors principal")
    algebra = report.algebra
    factors = [TruncAlgebra(f.trunc_order) for f in report.factors]
    target = SumAlgebra(factors)
    new_basis = [v for f in report.factors for v in f.basis]
    images = []
    for fi, f in enumerate(report.factors):
        for k in range(f.trunc_order):
            comps = []
            for gi, g in enumerate(factors):
                if gi == fi:
                    comps.append(g.eps(k) if k > 0 else g.one())
                else:
                    comps.append(g.zero())
            images.append(target.element(comps))

    def phi(vec):
        coords = _solve_coords(new_basis, vec)
        acc = target.zero()
        for c, img in zip(coords, images):
            if c != 0:
                acc = acc + img * c
        return acc

    checked = 0
    ok = phi(algebra.unit) == target.one()
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            x = algebra.basis_vector(i)
            y = algebra.basis_vector(j)
            if phi(algebra.mult(x, y)) != phi(x) * phi(y):
                ok = False
            checked += 1
    return ReassemblyCheck(sum_algebra=target, ok=ok, checked_products=checked)
