"""Untwisted simply-laced affine Kac-Moody algebras with exact structure constants.

The finite simple algebra g (type A/D/E) is built on the root lattice with a
bimultiplicative asymmetry cocycle eps fixing the signs of the Chevalley
constants.  The affine algebra is g (x) C[t,t^-1] + C c + C d with the loop
bracket, all scalars exact rationals.

Basis conventions
-----------------
* x_gamma (gamma a finite root) is the Chevalley root vector; for every root
  [x_gamma, x_{-gamma}] = h_gamma and (x_gamma, x_{-gamma}) = 1.
* h_i = simple coroot i; the invariant form on the Cartan is the (symmetric)
  Cartan matrix, normalized so every root has squared length 2.
* Modes: RealMode(gamma, n) = x_gamma (x) t^n, CartanMode(i, n) = h_i (x) t^n,
  plus Central (c) and Derivation (d), with (c, d) = 1 and (d, d) = 0.
"""

from fractions import Fraction
from typing import Iterable, NamedTuple

# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

SIMPLY_LACED = ("A", "D", "E")


class CartanType(NamedTuple):
    family: str
    rank: int

    def validate(self):
        if self.family not in SIMPLY_LACED:
            raise ValueError(
                f"unsupported Cartan type {self.family}{self.rank}: "
                "only simply-laced families A, D, E are supported")
        if self.family == "A" and self.rank < 1:
            raise ValueError("type A needs rank >= 1")
        if self.family == "D" and self.rank < 4:
            raise ValueError("type D needs rank >= 4")
        if self.family == "E" and self.rank not in (6, 7, 8):
            raise ValueError("type E needs rank in {6, 7, 8}")
        return self


def parse_cartan_type(label: str) -> CartanType:
    """Parse 'A1', 'D4', 'E6', ... into a validated CartanType."""
    if len(label) < 2 or label[0] not in "ADE":
        raise ValueError(f"cannot parse Cartan type {label!r}")
    return CartanType(label[0], int(label[1:])).validate()


def dynkin_edges(t: CartanType):
    """Edges (i, j), i < j, of the Dynkin diagram, Bourbaki numbering, 0-based."""
    n = t.rank
    if t.family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if t.family == "D":
        return [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    # E6/E7/E8: chain 1-3-4-5-6(-7-8) with node 2 attached to node 4 (1-based).
    chain = [(0, 2), (2, 3), (3, 4), (4, 5)]
    if n >= 7:
        chain.append((5, 6))
    if n == 8:
        chain.append((6, 7))
    return chain + [(1, 3)]


def cartan_matrix(t: CartanType):
    n = t.rank
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in dynkin_edges(t):
        a[i][j] = a[j][i] = -1
    return tuple(tuple(row) for row in a)


# ---------------------------------------------------------------------------
# Roots and modes
# ---------------------------------------------------------------------------

class Root(NamedTuple):
    """Affine root: finite part (coordinates over simple roots) plus delta level."""
    finite: tuple
    level: int

    def __neg__(self):
        return Root(tuple(-c for c in self.finite), -self.level)

    def __add__(self, other):
        return Root(tuple(a + b for a, b in zip(self.finite, other.finite)),
                    self.level + other.level)

    @property
    def is_finite_zero(self):
        return all(c == 0 for c in self.finite)


REAL = "Real"
IMAGINARY = "Imaginary"
NOT_A_ROOT = "NotARoot"


class Mode(NamedTuple):
    """Basis mode of the affine algebra.

    kind: 're' (x_gamma (x) t^n), 'h' (h_i (x) t^n), 'c', 'd'.
    payload: the finite root tuple for 're', (i,) for 'h', () otherwise.
    The tuple ordering (kind, n, payload) is the canonical mode order.
    """
    kind: str
    n: int
    payload: tuple


def real_mode(gamma, n=0) -> Mode:
    return Mode("re", n, tuple(gamma))


def cartan_mode(i, n=0) -> Mode:
    return Mode("h", n, (i,))


CENTRAL = Mode("c", 0, ())
DERIVATION = Mode("d", 0, ())


def mode_root(mode: Mode, rank: int):
    """Root of the root space containing the mode (None for weight-0 modes)."""
    if mode.kind == "re":
        return Root(mode.payload, mode.n)
    if mode.kind == "h" and mode.n != 0:
        return Root((0,) * rank, mode.n)
    return None


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

class El:
    """Finite rational linear combination of modes.  Immutable by convention."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def of(cls, mode: Mode, coeff=1):
        return cls({mode: Fraction(coeff)})

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            v = t.get(m, 0) + c
            if v:
                t[m] = v
            elif m in t:
                del t[m]
        return El(t)

    def __sub__(self, other):
        return self + (other * -1)

    def __mul__(self, scalar):
        if scalar == 0:
            return El()
        return El({m: c * scalar for m, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, El) and self.terms == other.terms

    def __hash__(self):
        return hash(self.canon())

    def __bool__(self):
        return bool(self.terms)

    def canon(self):
        """Canonical hashable form: ((mode, coeff), ...) sorted by mode."""
        return tuple(sorted(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "El(0)"
        bits = []
        for m, c in sorted(self.terms.items()):
            if m.kind == "re":
                name = f"x{list(m.payload)}@{m.n}"
            elif m.kind == "h":
                name = f"h{m.payload[0] + 1}@{m.n}"
            else:
                name = {"c": "c", "d": "d"}[m.kind]
            bits.append(f"{c}*{name}")
        return "El(" + " + ".join(bits) + ")"


ZERO = El()


# ---------------------------------------------------------------------------
# Finite root system enumeration
# ---------------------------------------------------------------------------

def _finite_roots(cartan):
    """All roots of the simply-laced finite root system, as coefficient tuples.

    BFS over heights: beta + alpha_i is a root iff (beta, alpha_i) = -1
    (root strings in simply-laced systems have length at most 2).
    """
    n = len(cartan)

    def pair(beta, i):
        return sum(beta[j] * cartan[j][i] for j in range(n))

    simples = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    positives = set(simples)
    frontier = list(simples)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(n):
                if pair(beta, i) == -1:
                    gamma = tuple(b + s for b, s in zip(beta, simples[i]))
                    if gamma not in positives:
                        positives.add(gamma)
                        new.append(gamma)
        frontier = new
    allroots = set(positives) | {tuple(-c for c in b) for b in positives}
    return sorted(allroots), sorted(positives)


# ---------------------------------------------------------------------------
# The algebra
# ---------------------------------------------------------------------------

class AffineAlgebra:
    """Immutable container for the affine algebra data of one Cartan type.

    Built eagerly: finite roots, the asymmetry cocycle table on pairs of
    roots, structure constants in the Chevalley basis, and the invariant
    form.  All downstream operations are pure.
    """

    def __init__(self, cartan_type: CartanType):
        self.cartan_type = cartan_type.validate()
        self.rank = cartan_type.rank
        self.cartan = cartan_matrix(cartan_type)
        self.finite_roots, self.finite_positive = _finite_roots(self.cartan)
        self._finite_set = set(self.finite_roots)
        # Cocycle on simple roots: -1 on the diagonal and on oriented edges.
        n = self.rank
        eps_simple = [[1] * n for _ in range(n)]
        for i in range(n):
            eps_simple[i][i] = -1
        for i, j in dynkin_edges(cartan_type):
            eps_simple[i][j] = -1
        self._eps_simple = eps_simple
        self._eps_cache = {}
        self._zero = (0,) * n

    # -- scalar data --------------------------------------------------------

    def finite_form(self, a, b):
        """Invariant form on the finite weight lattice, (alpha_i,alpha_j)=A_ij."""
        return sum(a[i] * self.cartan[i][j] * b[j]
                   for i in range(self.rank) for j in range(self.rank))

    def epsilon(self, a, b):
        """Bimultiplicative asymmetry cocycle on the root lattice, values +-1."""
        key = (a, b)
        v = self._eps_cache.get(key)
        if v is None:
            e = 0
            eps = self._eps_simple
            for i in range(self.rank):
                if a[i]:
                    for j in range(self.rank):
                        if b[j] and eps[i][j] < 0:
                            e += a[i] * b[j]
            v = -1 if e % 2 else 1
            self._eps_cache[key] = v
        return v

    def chevalley_constant(self, a, b):
        """N(a, b) with [x_a, x_b] = N(a, b) x_{a+b} for finite roots a, b.

        Equals eps(a, b) up to the sign flips that renormalize negative root
        vectors so that [x_a, x_{-a}] = h_a.
        """
        s = 1
        for g in (a, b, tuple(x + y for x, y in zip(a, b))):
            if g < self._zero:
                s = -s
        return s * self.epsilon(a, b)

    def is_finite_root(self, a):
        return tuple(a) in self._finite_set

    # -- roots ---------------------------------------------------------------

    def classify_root(self, r: Root):
        if tuple(r.finite) in self._finite_set:
            return REAL
        if r.is_finite_zero and r.level != 0:
            return IMAGINARY
        return NOT_A_ROOT

    def roots_in_box(self, max_level: int):
        """All valid affine roots with |level| <= max_level, deterministic order."""
        if max_level < 0:
            raise ValueError("max_level must be >= 0")
        out = []
        zero = self._zero
        for lev in range(-max_level, max_level + 1):
            for f in self.finite_roots:
                out.append(Root(f, lev))
            if lev != 0:
                out.append(Root(zero, lev))
        out.sort(key=lambda r: (r.level, r.finite))
        return out

    def basis_modes(self, max_level: int):
        """All algebra basis modes with |level| <= max_level, plus c and d."""
        out = [CENTRAL, DERIVATION]
        for lev in range(-max_level, max_level + 1):
            for f in self.finite_roots:
                out.append(real_mode(f, lev))
            for i in range(self.rank):
                out.append(cartan_mode(i, lev))
        return out

    def root_vector(self, r: Root) -> El:
        """A canonical nonzero element of the root space of r (real/imaginary)."""
        kind = self.classify_root(r)
        if kind == REAL:
            return El.of(real_mode(tuple(r.finite), r.level))
        if kind == IMAGINARY:
            return El.of(cartan_mode(0, r.level))
        raise ValueError(f"{r} is not a root")

    def coroot_element(self, gamma) -> El:
        """h_gamma = sum_i c_i h_i for gamma = sum_i c_i alpha_i, at level 0."""
        return El({cartan_mode(i, 0): Fraction(c)
                   for i, c in enumerate(gamma) if c})

    # -- bracket and form -----------------------------------------------------

    def _bracket_modes(self, a: Mode, b: Mode) -> El:
        if a.kind == "c" or b.kind == "c":
            return ZERO
        if a.kind == "d":
            if b.kind == "d":
                return ZERO
            return El.of(b, b.n) if b.n else ZERO
        if b.kind == "d":
            return El.of(a, -a.n) if a.n else ZERO
        m, n = a.n, b.n
        if a.kind == "h" and b.kind == "h":
            if m + n == 0 and m != 0:
                pairing = self.cartan[a.payload[0]][b.payload[0]]
                if pairing:
                    return El.of(CENTRAL, m * pairing)
            return ZERO
        if a.kind == "h" and b.kind == "re":
            i = a.payload[0]
            pairing = sum(self.cartan[i][j] * b.payload[j] for j in range(self.rank))
            if pairing:
                return El.of(real_mode(b.payload, m + n), pairing)
            return ZERO
        if a.kind == "re" and b.kind == "h":
            return self._bracket_modes(b, a) * -1
        # real x real
        al, be = a.payload, b.payload
        s = tuple(x + y for x, y in zip(al, be))
        if s == self._zero:
            out = {cartan_mode(i, m + n): Fraction(c)
                   for i, c in enumerate(al) if c}
            if m + n == 0 and m != 0:
                out[CENTRAL] = Fraction(m)  # (x_a, x_-a) = 1
            elif m + n == 0:
                pass
            return El(out)
        if s in self._finite_set:
            return El.of(real_mode(s, m + n), self.chevalley_constant(al, be))
        return ZERO

    def bracket(self, x, y) -> El:
        """Lie bracket, bilinear over modes; total on valid elements."""
        if isinstance(x, Mode):
            x = El.of(x)
        if isinstance(y, Mode):
            y = El.of(y)
        acc = {}
        for ma, ca in x.terms.items():
            for mb, cb in y.terms.items():
                res = self._bracket_modes(ma, mb)
                if res:
                    f = ca * cb
                    for m, c in res.terms.items():
                        v = acc.get(m, 0) + f * c
                        if v:
                            acc[m] = v
                        elif m in acc:
                            del acc[m]
        return El(acc)

    def _form_modes(self, a: Mode, b: Mode):
        ka, kb = a.kind, b.kind
        if ka == "c":
            return Fraction(1) if kb == "d" else Fraction(0)
        if ka == "d":
            return Fraction(1) if kb == "c" else Fraction(0)
        if kb in ("c", "d"):
            return Fraction(0)
        if a.n + b.n != 0:
            return Fraction(0)
        if ka == "h" and kb == "h":
            return Fraction(self.cartan[a.payload[0]][b.payload[0]])
        if ka == "re" and kb == "re":
            if all(x + y == 0 for x, y in zip(a.payload, b.payload)):
                return Fraction(1)
            return Fraction(0)
        return Fraction(0)

    def form(self, x, y):
        """Normalized invariant symmetric form, (theta,theta) = 2, (c,d) = 1."""
        if isinstance(x, Mode):
            x = El.of(x)
        if isinstance(y, Mode):
            y = El.of(y)
        total = Fraction(0)
        for ma, ca in x.terms.items():
            for mb, cb in y.terms.items():
                v = self._form_modes(ma, mb)
                if v:
                    total += ca * cb * v
        return total

    def mode_weight(self, mode: Mode):
        """Finite-root displacement and level of a mode, as a Root-shaped pair."""
        if mode.kind == "re":
            return Root(mode.payload, mode.n)
        if mode.kind == "h":
            return Root(self._zero, mode.n)
        return Root(self._zero, 0)

    def __repr__(self):
        return f"AffineAlgebra({self.cartan_type.family}{self.rank})"


def build_affine(t) -> AffineAlgebra:
    """Construct the affine algebra for a CartanType or a label like 'A1'."""
    if isinstance(t, str):
        t = parse_cartan_type(t)
    return AffineAlgebra(t)
