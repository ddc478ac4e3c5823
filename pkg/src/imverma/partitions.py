"""Quasi partitions of the affine root system and natural parabolic subalgebras.

A quasi partition P satisfies P cap -P = empty, P cup -P = Delta, and the
subalgebra generated by H and the root spaces of P contains no root space
outside P.  Parabolic subalgebras here are the type-II family attached to a
subset omega of the simple roots: the Levi real roots are those with finite
part supported on omega, the radical takes the positive finite parts outside
omega, and the imaginary part of the Levi is either all of the Heisenberg
subalgebra or only its omega-span, with the orthogonal complement split
between radical and opposite radical by a triangular sign rule.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from . import linalg
from .core_algebra import (
    AffineAlgebra, El, IMAGINARY, NOT_A_ROOT, REAL, Root, cartan_mode, real_mode,
)

# ---------------------------------------------------------------------------
# Quasi partitions
# ---------------------------------------------------------------------------


class QuasiPartition:
    """A quasi partition, stored extensionally in a level box plus a tag.

    The tag ('standard', 'natural', 'phi', 'extensional') extends membership
    beyond the box in closed form where possible; 'extensional' partitions
    answer None (unknown) outside the box.
    """

    def __init__(self, alg: AffineAlgebra, tag, box, roots, phi=None):
        self.alg = alg
        self.tag = tag
        self.box = box
        self.roots = frozenset(roots)
        self.phi = dict(phi) if phi else None
        self._zero = (0,) * alg.rank
        self._pos = set(alg.finite_positive)

    def contains(self, r: Root):
        """True/False membership, or None when undecidable from the data."""
        if abs(r.level) <= self.box:
            return r in self.roots
        f = tuple(r.finite)
        if self.tag == "standard":
            if f in self._pos:
                return True
            if f == self._zero:
                return r.level > 0
            if self.alg.is_finite_root(f):
                return r.level > 0
            return False
        if self.tag in ("natural", "phi"):
            if f in self._pos:
                return True
            if f != self._zero and self.alg.is_finite_root(f):
                return False
            if f == self._zero and r.level != 0:
                if self.tag == "natural":
                    return r.level > 0
                s = self.phi.get(abs(r.level))
                if s is None:
                    return None
                return (r.level > 0) == (s > 0)
        return None

    def to_json(self):
        data = {"tag": self.tag, "box": self.box,
                "roots": sorted([list(r.finite), r.level] for r in self.roots)}
        if self.phi is not None:
            data["phi"] = ["+" if self.phi[k] > 0 else "-"
                           for k in sorted(self.phi)]
        return data


def _boxed(alg, pred, box):
    return [r for r in alg.roots_in_box(box) if pred(r)]


def standard_partition(alg: AffineAlgebra, box: int) -> QuasiPartition:
    """Delta_+ with respect to the standard basis, inside the level box."""
    pos = set(alg.finite_positive)

    def pred(r):
        if r.level > 0:
            return True
        if r.level < 0:
            return False
        return tuple(r.finite) in pos

    return QuasiPartition(alg, "standard", box, _boxed(alg, pred, box))


def natural_partition(alg: AffineAlgebra, box: int) -> QuasiPartition:
    """Positive finite parts at every level, plus the positive imaginary roots."""
    pos = set(alg.finite_positive)

    def pred(r):
        f = tuple(r.finite)
        if f in pos:
            return True
        if r.is_finite_zero:
            return r.level > 0
        return False

    return QuasiPartition(alg, "natural", box, _boxed(alg, pred, box))


def phi_partition(alg: AffineAlgebra, phi, box: int) -> QuasiPartition:
    """Natural real part; imaginary levels flipped to the sign phi prescribes.

    phi maps each k in 1..box to +1 or -1 (also accepts '+'/'-' strings);
    phi(k) = + keeps k*delta positive, phi(k) = - swaps in -k*delta.
    """
    table = {}
    for k in range(1, box + 1):
        v = phi[k - 1] if isinstance(phi, (list, tuple, str)) else phi[k]
        if v in ("+", 1, +1, True):
            table[k] = 1
        elif v in ("-", -1, False):
            table[k] = -1
        else:
            raise ValueError(f"phi({k}) = {v!r} is not a sign")
    pos = set(alg.finite_positive)

    def pred(r):
        f = tuple(r.finite)
        if f in pos:
            return True
        if r.is_finite_zero:
            return (r.level > 0) == (table[abs(r.level)] > 0)
        return False

    return QuasiPartition(alg, "phi", box, _boxed(alg, pred, box), phi=table)


def extensional_partition(alg: AffineAlgebra, roots, box: int) -> QuasiPartition:
    return QuasiPartition(alg, "extensional", box, roots)


@dataclass
class ValidationReport:
    """Outcome of a quasi-partition check.  verdict None means inconclusive."""
    verdict: Optional[bool]
    condition: Optional[str] = None
    witnesses: list = field(default_factory=list)
    real_part_sum_closed: bool = True
    box: int = 0

    def to_json(self):
        return {
            "verdict": ("inconclusive at this box" if self.verdict is None
                        else bool(self.verdict)),
            "condition": self.condition,
            "witnesses": sorted([list(r.finite), r.level] for r in self.witnesses),
            "real_part_sum_closed": self.real_part_sum_closed,
            "box": self.box,
        }


def validate_quase_partition(alg: AffineAlgebra, part: QuasiPartition, box: int) -> ValidationReport:
    """Check the two set conditions and close the generated subalgebra.

    Condition (iii) tracks, per root, the exact subspace of the root space
    reached by iterated brackets of the root spaces of P (Cartan subspaces can
    fill only partially), and flags any nonzero subspace at a root outside P.
    """
    allroots = alg.roots_in_box(box)
    inbox = [r for r in allroots if part.contains(r)]
    inset = set(inbox)
    # (i) disjointness, (ii) covering
    for r in inbox:
        if -r in inset:
            return ValidationReport(False, "P cap -P nonempty", [r, -r], box=box)
    missing = [r for r in allroots if r not in inset and -r not in inset]
    if missing:
        return ValidationReport(False, "P cup -P misses roots", missing[:3], box=box)

    # real-part sum closure (reported, not a failure condition by itself)
    real_in = [r for r in inbox if not r.is_finite_zero]
    real_set = set(real_in)
    sum_closed = True
    for a in real_in:
        for b in real_in:
            s = a + b
            if abs(s.level) <= box and alg.classify_root(s) == REAL and s not in real_set:
                sum_closed = False

    # (iii) bracket closure with exact subspace tracking
    zero = (0,) * alg.rank
    spaces = {}  # Root -> True (full real line) | list of h-vectors (imag)
    for r in inbox:
        if r.is_finite_zero:
            spaces[r] = [tuple(Fraction(int(i == j)) for j in range(alg.rank))
                         for i in range(alg.rank)]
        else:
            spaces[r] = True
    inconclusive = []

    def imag_add(root, vec, acc):
        cur = acc.get(root)
        rows = list(cur) if isinstance(cur, list) else []
        if linalg.in_row_span(rows, vec):
            return False
        rows.append(tuple(vec))
        acc[root] = rows
        return True

    out_of_box = []  # nonzero contributions that left the box
    changed = True
    while changed:
        changed = False
        items = list(spaces.items())
        for r1, s1 in items:
            for r2, s2 in items:
                target = r1 + r2
                kind = alg.classify_root(target)
                if kind == NOT_A_ROOT:
                    continue
                if kind == IMAGINARY:
                    # only real x real contributes (imaginary spaces commute)
                    if r1.is_finite_zero or r2.is_finite_zero:
                        continue
                    if abs(target.level) > box:
                        out_of_box.append(target)
                        continue
                    # [x_a (x) t^m, x_-a (x) t^n] spans h_a at level m+n
                    vec = tuple(Fraction(c) for c in r1.finite)
                    if imag_add(target, vec, spaces):
                        changed = True
                    continue
                # real target
                nonzero = False
                if not r1.is_finite_zero and not r2.is_finite_zero:
                    nonzero = True  # Chevalley constant is +-1
                else:
                    ivec = s1 if r1.is_finite_zero else s2
                    beta = r2.finite if r1.is_finite_zero else r1.finite
                    for v in ivec:
                        pair = sum(v[i] * alg.cartan[i][j] * beta[j]
                                   for i in range(alg.rank)
                                   for j in range(alg.rank))
                        if pair != 0:
                            nonzero = True
                            break
                if not nonzero:
                    continue
                if abs(target.level) > box:
                    out_of_box.append(target)
                elif spaces.get(target) is not True:
                    spaces[target] = True
                    changed = True

    violations = []
    for r, s in sorted(spaces.items(), key=lambda kv: (kv[0].level, kv[0].finite)):
        member = part.contains(r)
        nonzero = s is True or (isinstance(s, list) and len(s) > 0)
        if nonzero and member is False:
            violations.append(r)
        elif nonzero and member is None:
            inconclusive.append(r)
    for r in sorted(set(out_of_box)):
        member = part.contains(r)
        if member is False:
            violations.append(r)
        elif member is None:
            inconclusive.append(r)
    if violations:
        return ValidationReport(False, "generated subalgebra escapes P", violations,
                                real_part_sum_closed=sum_closed, box=box)
    if inconclusive:
        return ValidationReport(None, "inconclusive at this box",
                                sorted(set(inconclusive))[:3],
                                real_part_sum_closed=sum_closed, box=box)
    return ValidationReport(True, None, [], real_part_sum_closed=sum_closed, box=box)


# ---------------------------------------------------------------------------
# Heights
# ---------------------------------------------------------------------------

def omega_height(alg: AffineAlgebra, omega, gamma):
    """Height of gamma = -sum_{j in omega} k_j alpha_j with all k_j >= 0.

    gamma is a finite coefficient vector; rejects anything outside Q^omega_-.
    """
    omega = set(omega)
    total = 0
    for j, c in enumerate(gamma):
        if c == 0:
            continue
        if j not in omega:
            raise ValueError(f"coordinate {j} outside omega has coefficient {c}")
        if c > 0:
            raise ValueError(f"coefficient of alpha_{j} is positive: not in Q^omega_-")
        total += -c
    return total


# ---------------------------------------------------------------------------
# Parabolic subalgebras
# ---------------------------------------------------------------------------

def _support(finite):
    return frozenset(i for i, c in enumerate(finite) if c)


class StandardSigns:
    """Default triangular rule: positive levels on the radical side."""

    def side(self, k, j):
        return 1


class ParabolicSubalgebra:
    """Type-II parabolic (or Borel) datum with exact per-level imaginary bases.

    The imaginary part of the ambient algebra at level k splits into paired
    oscillator lines: for each simple index j there is an "up" vector (used at
    positive levels) and a "down" vector (its dual at negative levels), with
    [up_i (x) t^k, down_j (x) t^-k] = k delta_ij c exactly.  Pairs with j in
    levi_osc belong to the Levi; the rest split between radical and opposite
    radical according to `split.side(k, j)`.

    `real_support` restricts the whole datum to the subalgebra generated by a
    subset of simple roots (used to induce over the Levi's own l0-part).
    """

    def __init__(self, alg: AffineAlgebra, omega, imaginary="full",
                 split=None, real_support=None, borel=False, osc_support=None):
        self.alg = alg
        self.omega = frozenset(omega)
        self.imaginary = imaginary
        self.split = split or StandardSigns()
        self.real_support = (frozenset(range(alg.rank)) if real_support is None
                             else frozenset(real_support))
        self.osc_support = (self.real_support if osc_support is None
                            else frozenset(osc_support))
        self.borel = borel
        if not self.omega <= self.real_support:
            raise ValueError("omega must lie inside the real support")
        if not self.real_support <= self.osc_support:
            raise ValueError("oscillator support must contain the real support")
        self._pos = set(alg.finite_positive)
        self._build_pairs()

    # -- imaginary oscillator pairs -------------------------------------------

    def _build_pairs(self):
        alg = self.alg
        n = alg.rank
        support = sorted(self.osc_support)
        omega = sorted(self.omega)
        rest = [j for j in support if j not in self.omega]
        a_full = [[Fraction(alg.cartan[i][j]) for j in support] for i in support]
        inv_support = linalg.invert(a_full)
        pairs = {}
        # Levi-part pairs: coroots up, duals inside the omega span down.
        if omega:
            a_om = [[Fraction(alg.cartan[i][j]) for j in omega] for i in omega]
            inv_om = linalg.invert(a_om)
            for col, j in enumerate(omega):
                up = [Fraction(0)] * n
                up[j] = Fraction(1)
                down = [Fraction(0)] * n
                for row, i in enumerate(omega):
                    down[i] = inv_om[row][col]
                pairs[j] = (tuple(up), tuple(down))
        # Complement pairs: q_j (coroot made orthogonal to the omega span) up,
        # fundamental coweights of the support lattice down.
        for j in rest:
            up = [Fraction(0)] * n
            up[j] = Fraction(1)
            if omega:
                rhs = [Fraction(alg.cartan[i][j]) for i in omega]
                a_om = [[Fraction(alg.cartan[i][l]) for l in omega] for i in omega]
                coeffs = linalg.solve(a_om, rhs)
                for row, i in enumerate(omega):
                    up[i] -= coeffs[row]
            down = [Fraction(0)] * n
            col = support.index(j)
            for row, i in enumerate(support):
                down[i] = inv_support[row][col]
            pairs[j] = (tuple(up), tuple(down))
        self.osc_pairs = pairs
        self.levi_osc = (frozenset(pairs) if self.imaginary == "full"
                         else frozenset(self.omega))
        if self.borel:
            self.levi_osc = frozenset()
            if self.imaginary == "full":
                raise ValueError("a Borel datum needs a split imaginary part")

    # -- real root membership --------------------------------------------------

    def in_algebra(self, finite):
        return _support(finite) <= self.real_support

    def is_levi_real(self, finite):
        if self.borel:
            return False
        return self.in_algebra(finite) and _support(finite) <= self.omega

    def is_u_real(self, finite):
        return (self.in_algebra(finite) and tuple(finite) in self._pos
                and not self.is_levi_real(finite))

    def is_ubar_real(self, finite):
        return self.is_u_real(tuple(-c for c in finite))

    def levi_real_roots(self, box):
        return [r for r in self.alg.roots_in_box(box)
                if not r.is_finite_zero and self.is_levi_real(r.finite)]

    def u_real_roots(self, box):
        return [r for r in self.alg.roots_in_box(box)
                if not r.is_finite_zero and self.is_u_real(r.finite)]

    def ubar_real_roots(self, box):
        return [r for r in self.alg.roots_in_box(box)
                if not r.is_finite_zero and self.is_ubar_real(r.finite)]

    # -- imaginary bases ---------------------------------------------------------

    def _pair_vector(self, j, k):
        """Basis vector of oscillator pair j at level k (up for k>0, down for k<0)."""
        up, down = self.osc_pairs[j]
        return up if k > 0 else down

    def levi_imag_vectors(self, k):
        if k == 0:
            return []
        return [self._pair_vector(j, k) for j in sorted(self.levi_osc)]

    def u_imag_vectors(self, k):
        if k == 0:
            return []
        out = []
        for j in sorted(self.osc_pairs):
            if j in self.levi_osc:
                continue
            side = self.split.side(abs(k), j)
            if (k > 0) == (side > 0):
                out.append(self._pair_vector(j, k))
        return out

    def ubar_imag_vectors(self, k):
        if k == 0:
            return []
        out = []
        for j in sorted(self.osc_pairs):
            if j in self.levi_osc:
                continue
            side = self.split.side(abs(k), j)
            if (k > 0) != (side > 0):
                out.append(self._pair_vector(j, k))
        return out

    # -- Levi decomposition data (G(l), G(l)-perp) --------------------------------

    def g_levi_basis(self, k):
        """Basis of G(l-hat) at level k: the omega-span of the Cartan loop."""
        if k == 0:
            return []
        return [self._pair_vector(j, k) for j in sorted(self.omega)]

    def g_perp_basis(self, k):
        """Basis of G(l-hat)-perp at level k (complement pairs)."""
        if k == 0:
            return []
        return [self._pair_vector(j, k)
                for j in sorted(self.osc_support - self.omega)]

    def to_json(self):
        return {
            "omega": sorted(i + 1 for i in self.omega),
            "imaginary": ("full" if self.imaginary == "full" else "split"),
            "real_support": sorted(i + 1 for i in self.real_support),
            "borel": self.borel,
        }


def natural_parabolic(alg: AffineAlgebra, omega, imaginary="full", split=None,
                      box=None) -> ParabolicSubalgebra:
    """The type-II parabolic attached to omega, containing the natural Borel."""
    return ParabolicSubalgebra(alg, omega, imaginary=imaginary, split=split)


def natural_borel(alg: AffineAlgebra, split=None) -> ParabolicSubalgebra:
    """The natural Borel subalgebra (omega empty, split imaginary part)."""
    return ParabolicSubalgebra(alg, (), imaginary="split",
                               split=split or StandardSigns(), borel=True)


def levi_zero_borel(alg: AffineAlgebra, support, split=None) -> ParabolicSubalgebra:
    """Natural Borel of the subalgebra l0 generated by H and the `support` roots.

    Used to build Verma-type modules over the Levi's l0-part; for support =
    all simple roots this is the natural Borel of the full algebra.
    """
    return ParabolicSubalgebra(alg, (), imaginary="split",
                               split=split or StandardSigns(),
                               real_support=support, borel=True)


def levi_nat_borel(alg: AffineAlgebra, support, split=None) -> ParabolicSubalgebra:
    """Natural Borel of the natural Levi l-hat associated with `support`.

    Unlike the l0-Borel this keeps the whole Heisenberg part (the Levi of a
    natural parabolic contains every imaginary root space), so inducing the
    one-dimensional module from it yields the Verma module of the Levi.
    """
    return ParabolicSubalgebra(alg, (), imaginary="split",
                               split=split or StandardSigns(),
                               real_support=support, borel=True,
                               osc_support=range(alg.rank))


@dataclass
class LeviOrthogonalReport:
    """Per-level bases of G(l), G(l)-perp and the three defining checks."""
    levels: dict
    sum_is_direct: bool
    commutes_with_levi0: bool
    intersection_is_center: bool

    @property
    def ok(self):
        return (self.sum_is_direct and self.commutes_with_levi0
                and self.intersection_is_center)


def levi_orthogonal(alg: AffineAlgebra, parab: ParabolicSubalgebra, box: int):
    """Compute and verify the Levi-orthogonal decomposition level by level."""
    levels = {}
    sum_direct = True
    commutes = True
    intersect_center = True
    support = sorted(parab.osc_support)
    for k in range(-box, box + 1):
        if k == 0:
            continue
        gl = parab.g_levi_basis(k)
        gp = parab.g_perp_basis(k)
        levels[k] = {"g_levi": gl, "g_perp": gp}
        rows = [list(v) for v in gl + gp]
        if rows and linalg.rank(rows) != len(rows):
            sum_direct = False
        if len(rows) != len(support):
            sum_direct = False
        # [G(l)-perp, l0] = 0: perp vectors pair to zero with the omega coroots
        # and with every Levi real root.
        for v in gp:
            for i in parab.omega:
                if sum(v[a] * alg.cartan[a][i] for a in range(alg.rank)) != 0:
                    commutes = False
            for r in parab.levi_real_roots(0):
                pair = sum(v[a] * alg.cartan[a][b] * r.finite[b]
                           for a in range(alg.rank) for b in range(alg.rank))
                if pair != 0:
                    commutes = False
        # l0 cap G(l)-perp = C c: at every nonzero level the two spaces meet
        # trivially, which is the direct-sum check again; record it.
        if rows and gl and gp:
            if linalg.rank([list(v) for v in gl]) + linalg.rank([list(v) for v in gp]) \
                    != linalg.rank(rows):
                intersect_center = False
    return LeviOrthogonalReport(levels, sum_direct, commutes, intersect_center)
