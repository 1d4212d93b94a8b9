"""Matrix Chevalley groups: SL_{l+1} for A_l and Sp_4 for C2.

Each root alpha gets a nilpotent matrix X_alpha with X_alpha^2 = 0, and the
root subgroup element e(alpha, t) = I + t*X_alpha over any commutative ring
the parameter t lives in.  On top of that sit the monomial and diagonal
elements

    w(alpha, u) = e(alpha, u) e(-alpha, -1/u) e(alpha, u)
    h(alpha, u) = w(alpha, u) w(alpha, -1)

and the commutator formula

    [e(alpha, s), e(beta, t)] = prod e(i*alpha + j*beta, N_ij s^i t^j)

whose integer constants N_ij in {+-1, +-2} are inferred symbolically, frozen
as golden data, and re-verified over truncated rings.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .kernel import (
    Matrix,
    MultiPoly,
    PolyDomain,
    as_ring_element,
    is_zero,
    one_like,
    ring_inv,
    scalar_into,
    zero_like,
)
from .rings import TruncAlgebra, TruncElement
from .rootsys import Root, RootSystem, RootString, enumerate_roots, root_string

_DATA_DIR = Path(__file__).parent / "data"


class ModelInconsistencyError(ArithmeticError):
    """Raised when commutator constants cannot be determined consistently."""


class LevelError(ValueError):
    """Raised when an element is not trivial to the congruence depth required."""


class ChevalleyModel:
    """A faithful matrix model of the simply connected group for one system."""

    def __init__(self, system: RootSystem):
        self.system = system
        if system.family == "A":
            self.n = system.rank + 1
            self.lie_dim = self.n * self.n - 1
            self._nilpotents = self._build_a_family()
            self.omega = None
        else:
            self.n = 4
            self.lie_dim = 10
            self._nilpotents = self._build_c2()
            self.omega = Matrix.from_rows([
                [0, 0, 1, 0],
                [0, 0, 0, 1],
                [-1, 0, 0, 0],
                [0, -1, 0, 0],
            ])
        self._validate()

    # -- construction ---------------------------------------------------------

    def _build_a_family(self):
        out = {}
        n = self.n
        for r in self.system.roots:
            i = r.coords.index(1)
            j = r.coords.index(-1)
            rows = [[1 if (a == i and b == j) else 0 for b in range(n)] for a in range(n)]
            out[r] = Matrix.from_rows(rows)
        return out

    def _build_c2(self):
        def unit(i, j, n=4):
            return Matrix.from_rows(
                [[1 if (a == i and b == j) else 0 for b in range(n)] for a in range(n)])

        # basis (u1, u2, w1, w2); the form pairs u_i with w_i
        out = {
            Root((1, -1)): unit(0, 1) - unit(3, 2),
            Root((-1, 1)): unit(1, 0) - unit(2, 3),
            Root((1, 1)): unit(0, 3) + unit(1, 2),
            Root((-1, -1)): unit(3, 0) + unit(2, 1),
            Root((2, 0)): unit(0, 2),
            Root((-2, 0)): unit(2, 0),
            Root((0, 2)): unit(1, 3),
            Root((0, -2)): unit(3, 1),
        }
        return out

    def _validate(self):
        for r, x in self._nilpotents.items():
            if not (x * x).is_zero_matrix():
                raise ModelInconsistencyError("X for %r does not square to zero" % (r,))
            if not self.in_lie_algebra(x):
                raise ModelInconsistencyError("X for %r is outside the Lie algebra" % (r,))

    # -- basic elements --------------------------------------------------------

    def nilpotent(self, alpha: Root) -> Matrix:
        try:
            return self._nilpotents[alpha]
        except KeyError:
            raise ValueError("%r is not a root of %s" % (alpha, self.system.kind)) from None

    def identity(self, like=None) -> "GroupElement":
        return GroupElement(self, Matrix.identity(self.n, like=like))

    def e(self, alpha: Root, t) -> "GroupElement":
        """Root subgroup element I + t*X_alpha."""
        t = as_ring_element(t)
        x = self.nilpotent(alpha)
        one = one_like(t)
        zero = zero_like(t)
        entries = []
        for i in range(self.n):
            for j in range(self.n):
                base = one if i == j else zero
                c = x.entry(i, j)
                if c == 0:
                    entries.append(base)
                elif c == 1:
                    entries.append(base + t)
                else:
                    entries.append(base + t * scalar_into(c, t))
        return GroupElement(self, Matrix(self.n, self.n, tuple(entries)))

    def w(self, alpha: Root, u) -> "GroupElement":
        """Monomial element; u must be a unit of its ring."""
        u = as_ring_element(u)
        uinv = ring_inv(u)
        return self.e(alpha, u) * self.e(-alpha, -uinv) * self.e(alpha, u)

    def h(self, alpha: Root, u) -> "GroupElement":
        """Diagonal (torus) element w(alpha, u) w(alpha, -1)."""
        u = as_ring_element(u)
        minus_one = -one_like(u)
        return self.w(alpha, u) * self.w(alpha, minus_one)

    # -- membership -------------------------------------------------------------

    def in_lie_algebra(self, x: Matrix) -> bool:
        """Trace zero for type A; X^T Omega + Omega X = 0 for the symplectic model."""
        if self.system.family == "A":
            return is_zero(x.trace())
        omega = _embed_like(self.omega, x)
        return (x.transpose() * omega + omega * x).is_zero_matrix()

    def check_membership(self, g: "GroupElement") -> bool:
        """det = 1 for type A; g^T Omega g = Omega for the symplectic model."""
        m = g.matrix
        if self.system.family == "A":
            return m.det() == one_like(m.entries[0])
        omega = _embed_like(self.omega, m)
        return m.transpose() * omega * m == omega

    def __repr__(self):
        name = "SL_%d" % self.n if self.system.family == "A" else "Sp_4"
        return "ChevalleyModel(%s as %s)" % (self.system.kind, name)


def _embed_like(m: Matrix, sample_matrix: Matrix):
    sample = sample_matrix.entries[0]
    if isinstance(sample, Fraction):
        return m
    return Matrix(m.nrows, m.ncols,
                  tuple(scalar_into(x, sample) for x in m.entries))


def build_model(kind: str) -> ChevalleyModel:
    return ChevalleyModel(enumerate_roots(kind))


class GroupElement:
    """Group element of a Chevalley model: a matrix plus its model."""

    __slots__ = ("model", "matrix")

    def __init__(self, model: ChevalleyModel, matrix: Matrix):
        self.model = model
        self.matrix = matrix

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not isinstance(other, GroupElement) or other.model is not self.model:
            raise ValueError("group elements from different models")
        return GroupElement(self.model, self.matrix * other.matrix)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.model, self.matrix.inv())

    def conjugate(self, other: "GroupElement") -> "GroupElement":
        """self * other * self^{-1}."""
        return self * other * self.inverse()

    def commutator(self, other: "GroupElement") -> "GroupElement":
        """[self, other] = self other self^{-1} other^{-1}."""
        return self * other * self.inverse() * other.inverse()

    def is_identity(self) -> bool:
        return self.matrix.is_identity()

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.model is other.model and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return "GroupElement(%r)" % (self.matrix,)


# ---------------------------------------------------------------------------
# commutator structure constants

class StructureConstants:
    """The integer constants N_ij of the commutator formula, per ordered pair."""

    def __init__(self, kind: str, table: dict):
        self.kind = kind
        self.table = dict(table)

    def get(self, alpha: Root, beta: Root, i: int, j: int) -> int:
        key = (alpha.coords, beta.coords, i, j)
        if key not in self.table:
            raise KeyError("no constant recorded for %s" % (key,))
        return self.table[key]

    def items_sorted(self):
        return sorted(self.table.items())

    def to_lines(self):
        lines = ["# structure constants for %s" % self.kind,
                 "# alpha beta i j N"]
        for (ac, bc, i, j), n in self.items_sorted():
            lines.append("%s %s %d %d %d" % (
                ",".join(str(c) for c in ac), ",".join(str(c) for c in bc), i, j, n))
        return lines

    @staticmethod
    def from_lines(kind: str, lines) -> "StructureConstants":
        table = {}
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            a, b, i, j, n = line.split()
            key = (tuple(int(c) for c in a.split(",")),
                   tuple(int(c) for c in b.split(",")), int(i), int(j))
            table[key] = int(n)
        return StructureConstants(kind, table)

    def save(self, path):
        Path(path).write_text("\n".join(self.to_lines()) + "\n")

    @staticmethod
    def load(path) -> "StructureConstants":
        text = Path(path).read_text()
        kind = "?"
        for line in text.splitlines():
            if line.startswith("# structure constants for "):
                kind = line.rsplit(" ", 1)[1]
                break
        return StructureConstants.from_lines(kind, text.splitlines())

    def __eq__(self, other):
        return (isinstance(other, StructureConstants)
                and self.kind == other.kind and self.table == other.table)


def builtin_constants_path(kind: str) -> Path:
    return _DATA_DIR / ("structure_constants_%s.txt" % kind.upper())


def load_structure_constants(kind: str) -> StructureConstants:
    path = builtin_constants_path(kind)
    if not path.exists():
        raise FileNotFoundError("no frozen constants for %s" % kind)
    return StructureConstants.load(path)


def ordered_root_pairs(system: RootSystem):
    """All ordered pairs (alpha, beta) with beta != -alpha."""
    zero = tuple(0 for _ in system.roots[0].coords)
    return [(a, b) for a, b in itertools.product(system.roots, repeat=2)
            if (a + b).coords != zero]


@dataclass
class CommutatorCheck:
    alpha: Root
    beta: Root
    ok: bool
    lhs: Matrix
    rhs: Matrix
    used: tuple  # of (i, j, N)


def commutator_rhs(model: ChevalleyModel, string: RootString, s, t,
                   constants: StructureConstants) -> GroupElement:
    g = model.identity(like=one_like(as_ring_element(s)))
    for i, j, gamma in string.terms:
        n = constants.get(string.alpha, string.beta, i, j)
        coeff = scalar_into(n, as_ring_element(s))
        g = g * model.e(gamma, coeff * (s ** i) * (t ** j))
    return g


def verify_commutator(model: ChevalleyModel, alpha: Root, beta: Root, s, t,
                      constants: StructureConstants) -> CommutatorCheck:
    """Check [e(alpha,s), e(beta,t)] against the recorded constants."""
    s = as_ring_element(s)
    t = as_ring_element(t)
    string = root_string(model.system, alpha, beta)
    lhs = (model.e(alpha, s) * model.e(beta, t)
           * model.e(alpha, -s) * model.e(beta, -t))
    rhs = commutator_rhs(model, string, s, t, constants)
    used = tuple((i, j, constants.get(alpha, beta, i, j)) for i, j, _ in string.terms)
    return CommutatorCheck(alpha=alpha, beta=beta, ok=(lhs.matrix == rhs.matrix),
                           lhs=lhs.matrix, rhs=rhs.matrix, used=used)


def verify_additivity(model: ChevalleyModel, alpha: Root, s, t) -> bool:
    """e(alpha, s) e(alpha, t) = e(alpha, s + t)."""
    s = as_ring_element(s)
    t = as_ring_element(t)
    return (model.e(alpha, s) * model.e(alpha, t)).matrix == model.e(alpha, s + t).matrix


_CANDIDATE_CONSTANTS = (1, -1, 2, -2)


def infer_structure_constants(model: ChevalleyModel,
                              ring: Optional[TruncAlgebra] = None) -> StructureConstants:
    """Determine every N_ij by exhaustive candidate sweep with uniqueness check.

    Works with formal parameters: over Q the parameters are the polynomial
    indeterminates s, t; over a truncated ring they are generic elements with
    formal coefficients.  A pair admitting zero or several candidate tuples
    raises ModelInconsistencyError.
    """
    if ring is None:
        s, t = MultiPoly.variables_in("s", "t")
    else:
        if not isinstance(ring.base, PolyDomain):
            raise ValueError("inference needs formal coefficients; use a polynomial base")
        s = ring.generic("s")
        t = ring.generic("t")
    table = {}
    for alpha, beta in ordered_root_pairs(model.system):
        string = root_string(model.system, alpha, beta)
        lhs = (model.e(alpha, s) * model.e(beta, t)
               * model.e(alpha, -s) * model.e(beta, -t)).matrix
        if not string.terms:
            if not lhs.is_identity():
                raise ModelInconsistencyError(
                    "empty root string but nontrivial commutator for (%r, %r)"
                    % (alpha, beta))
            continue
        matches = []
        for cand in itertools.product(_CANDIDATE_CONSTANTS, repeat=len(string.terms)):
            g = model.identity(like=one_like(s))
            for (i, j, gamma), n in zip(string.terms, cand):
                g = g * model.e(gamma, scalar_into(n, s) * (s ** i) * (t ** j))
            if g.matrix == lhs:
                matches.append(cand)
        if len(matches) != 1:
            raise ModelInconsistencyError(
                "pair (%r, %r) admits %d candidate constant tuples"
                % (alpha, beta, len(matches)))
        for (i, j, _), n in zip(string.terms, matches[0]):
            table[(alpha.coords, beta.coords, i, j)] = n
    return StructureConstants(model.system.kind, table)


# ---------------------------------------------------------------------------
# congruence filtration

def levi_decompose(g: GroupElement):
    """Split g over K[e]/(e^d) as g = g0 * c with g0 over K and c = I mod e."""
    sample = g.matrix.entries[0]
    if not isinstance(sample, TruncElement):
        raise ValueError("decomposition applies to elements over a truncated ring")
    algebra = sample.algebra
    base_matrix = Matrix(g.matrix.nrows, g.matrix.ncols,
                         tuple(x.coeff(0) for x in g.matrix.entries))
    g0 = GroupElement(g.model, base_matrix)
    embedded = Matrix(g.matrix.nrows, g.matrix.ncols,
                      tuple(algebra.element([x.coeff(0)]) for x in g.matrix.entries))
    c = GroupElement(g.model, embedded.inv() * g.matrix)
    return g0, c


def graded_piece(c: GroupElement, s: int) -> Matrix:
    """Coefficient of e^s in c, for c = I mod e^s; lands in the Lie algebra.

    Raises LevelError when c is not congruent to the identity modulo e^s.
    """
    sample = c.matrix.entries[0]
    if not isinstance(sample, TruncElement):
        raise ValueError("graded pieces live over a truncated ring")
    algebra = sample.algebra
    if not (1 <= s < algebra.d):
        raise LevelError("level %d outside 1..%d" % (s, algebra.d - 1))
    n = c.matrix.nrows
    one = algebra.base.one()
    zero = algebra.base.zero()
    for i in range(n):
        for j in range(n):
            x = c.matrix.entry(i, j)
            expect0 = one if i == j else zero
            if x.coeff(0) != expect0:
                raise LevelError("element is not congruent to the identity mod e")
            for k in range(1, s):
                if x.coeff(k) != zero:
                    raise LevelError(
                        "element is nontrivial at level %d < %d" % (k, s))
    return Matrix(n, n, tuple(c.matrix.entry(i, j).coeff(s)
                              for i in range(n) for j in range(n)))


@dataclass
class FiltrationReport:
    kind: str
    d: int
    lie_dim: int
    per_level: tuple
    total: int
    expected_total: int

    @property
    def ok(self) -> bool:
        return (self.total == self.expected_total
                and all(m == self.lie_dim for m in self.per_level))


def congruence_dimension(model: ChevalleyModel, d: int) -> FiltrationReport:
    """Dimension of the congruence kernel of G(K[e]/(e^d)) counted level by level.

    Each graded level is spanned by the pieces of e(alpha, e^s) and
    h(alpha, 1 + e^s); the expected count is (d - 1) * dim of the Lie algebra.
    """
    from .kernel import rref

    if d < 2:
        raise ValueError("filtration needs truncation order at least 2")
    algebra = TruncAlgebra(d)
    per_level = []
    for s in range(1, d):
        vectors = []
        for alpha in model.system.roots:
            piece = graded_piece(model.e(alpha, algebra.eps(s)), s)
            if not model.in_lie_algebra(piece):
                raise ModelInconsistencyError("piece of e(%r) leaves the Lie algebra" % (alpha,))
            vectors.append(piece.entries)
        for alpha in model.system.simple:
            g = model.h(alpha, algebra.one() + algebra.eps(s))
            piece = graded_piece(g, s)
            if not model.in_lie_algebra(piece):
                raise ModelInconsistencyError("piece of h(%r) leaves the Lie algebra" % (alpha,))
            vectors.append(piece.entries)
        m = Matrix.from_rows(vectors)
        _, rank, _ = rref(m)
        per_level.append(rank)
    total = sum(per_level)
    return FiltrationReport(kind=model.system.kind, d=d, lie_dim=model.lie_dim,
                            per_level=tuple(per_level), total=total,
                            expected_total=(d - 1) * model.lie_dim)


# ---------------------------------------------------------------------------
# perfectness

@dataclass
class PerfectnessWitness:
    alpha: Root
    s: Fraction
    torus: GroupElement
    inner: GroupElement
    target: GroupElement
    ok: bool


def perfectness_witness(model: ChevalleyModel, alpha: Root, r, s=Fraction(2)) -> PerfectnessWitness:
    """Express e(alpha, r) as the commutator [h(alpha, s), e(alpha, r/(s^2-1))].

    Works whenever s^2 - 1 is a unit; the default s = 2 divides by 3.  The
    identity holds because conjugation by h(alpha, s) scales the root
    parameter by s^2.
    """
    r = as_ring_element(r)
    s = Fraction(s)
    denom = s * s - 1
    if s == 0 or denom == 0:
        raise ValueError("scaling unit s must satisfy s != 0 and s^2 != 1")
    inner_param = r * scalar_into(Fraction(1) / denom, r)
    torus = model.h(alpha, scalar_into(s, r))
    inner = model.e(alpha, inner_param)
    target = model.e(alpha, r)
    got = torus.commutator(inner)
    return PerfectnessWitness(alpha=alpha, s=s, torus=torus, inner=inner,
                              target=target, ok=(got.matrix == target.matrix))
