"""The Heisenberg subalgebra, its triangular decompositions, and Fock modules.

Oscillators come in dual pairs per level: at level +k the coroot-side basis
vector of pair j, at level -k its form-dual, so [x_k^i, x_n^j] =
k delta_ij delta_{k,-n} c holds exactly over the rationals (the change of
basis from the plain Cartan loop modes is recorded on HeisenbergBasis).

A TriangularSpec assigns each oscillator pair a side: +1 means the positive-
level member annihilates the highest weight vector (standard), -1 swaps the
pair.  Fock modules are polynomial spaces in the creation oscillators with
annihilators acting as scaled partial derivatives, so the canonical
commutation relations hold by construction and every computation is exact.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .core_algebra import (
    AffineAlgebra, CENTRAL, DERIVATION, El, Mode, cartan_mode,
)
from .partitions import ParabolicSubalgebra


class ModuleDomainError(ValueError):
    """An element outside the algebra a module is defined over."""


# ---------------------------------------------------------------------------
# Triangular specs
# ---------------------------------------------------------------------------

class StandardSpec:
    kind = "standard"

    def side(self, k, j):
        return 1

    def to_json(self):
        return {"kind": "standard"}


class PhiSpec:
    """Level-wise signs: side(k, .) = phi(k)."""
    kind = "phi"

    def __init__(self, phi):
        if isinstance(phi, (list, tuple, str)):
            phi = {k + 1: v for k, v in enumerate(phi)}
        self.table = {}
        for k, v in phi.items():
            if v in ("+", 1, True):
                self.table[int(k)] = 1
            elif v in ("-", -1, False):
                self.table[int(k)] = -1
            else:
                raise ValueError(f"phi({k}) = {v!r} is not a sign")

    def side(self, k, j):
        return self.table.get(k, 1)

    def to_json(self):
        return {"kind": "phi",
                "phi": ["+" if self.table[k] > 0 else "-" for k in sorted(self.table)]}


class PerOscillatorSpec:
    """Signs per oscillator pair (k, j); pairs absent from the table default +."""
    kind = "per_oscillator"

    def __init__(self, psi):
        self.table = {}
        for (k, j), v in psi.items():
            self.table[(int(k), int(j))] = 1 if v in ("+", 1, True) else -1

    def side(self, k, j):
        return self.table.get((k, j), 1)

    def to_json(self):
        return {"kind": "per_oscillator",
                "psi": {f"{k},{j}": ("+" if v > 0 else "-")
                        for (k, j), v in sorted(self.table.items())}}


def spec_from_json(data):
    kind = data.get("kind", "standard")
    if kind == "standard":
        return StandardSpec()
    if kind == "phi":
        return PhiSpec(data["phi"])
    if kind == "per_oscillator":
        psi = {}
        for key, v in data["psi"].items():
            k, j = key.split(",")
            psi[(int(k), int(j))] = v
        return PerOscillatorSpec(psi)
    raise ValueError(f"unknown triangular spec kind {kind!r}")


# ---------------------------------------------------------------------------
# Oscillator pairs and the Heisenberg basis
# ---------------------------------------------------------------------------

def full_oscillator_pairs(alg: AffineAlgebra):
    """Dual-paired basis of the whole Heisenberg part: coroots up, coweights down."""
    return ParabolicSubalgebra(alg, (), imaginary="full").osc_pairs


def oscillator_element(pairs, j, level) -> El:
    """x_level^j as an algebra element (up vector for level>0, down for level<0)."""
    if level == 0:
        raise ValueError("oscillators live at nonzero levels")
    vec = pairs[j][0] if level > 0 else pairs[j][1]
    return El({cartan_mode(i, level): Fraction(c)
               for i, c in enumerate(vec) if c})


@dataclass
class HeisenbergBasis:
    """Verified oscillator data for G inside a level box."""
    alg: AffineAlgebra
    box: int
    pairs: dict                     # j -> (up vector, down vector) in coroot coords
    relations_verified: bool = False
    failures: list = field(default_factory=list)

    @property
    def m_k(self):
        return len(self.pairs)

    def element(self, j, level):
        return oscillator_element(self.pairs, j, level)


def heisenberg_basis(alg: AffineAlgebra, box: int) -> HeisenbergBasis:
    """Build the paired oscillator basis and verify all boxed relations exactly."""
    pairs = full_oscillator_pairs(alg)
    hb = HeisenbergBasis(alg, box, pairs)
    failures = []
    idx = sorted(pairs)
    levels = [k for k in range(-box, box + 1) if k]
    for k in levels:
        for n in levels:
            for i in idx:
                for j in idx:
                    got = alg.bracket(hb.element(i, k), hb.element(j, n))
                    want = El()
                    if i == j and k + n == 0:
                        want = El.of(CENTRAL, k)
                    if got != want:
                        failures.append(((k, i), (n, j)))
    hb.relations_verified = not failures
    hb.failures = failures
    return hb


# ---------------------------------------------------------------------------
# Weight module base
# ---------------------------------------------------------------------------

def vec_iadd(acc, other, coeff=1):
    """acc += coeff * other for sparse dict vectors (in place)."""
    if not coeff:
        return acc
    for k, c in other.items():
        v = acc.get(k, 0) + coeff * c
        if v:
            acc[k] = v
        elif k in acc:
            del acc[k]
    return acc


def vec_scale(vec, coeff):
    if not coeff:
        return {}
    return {k: coeff * c for k, c in vec.items()}


class WeightModule:
    """Shared behavior of the truncated weight modules.

    Subclasses provide `_keys` (canonically ordered), `disp(key)` giving the
    displacement of the key's weight from lambda as (finite root coefficients,
    delta level), and the two action hooks `_act_imag(vec, k, key)` and
    `_act_real(finite, n, key)` for the nonzero-level part of their algebra.
    """

    charge = Fraction(0)
    lam_fin = ()
    lam_d = Fraction(0)

    def keys(self):
        return self._keys

    def disp(self, key):
        raise NotImplementedError

    def abs_depth(self, key):
        """Total absolute level spent by the key (>= |disp level|)."""
        return abs(self.disp(key)[1])

    def weight_values(self, alg, key):
        """(mu(h_1..h_n), mu(d)) for the key's weight."""
        fin, lev = self.disp(key)
        vals = []
        for i in range(alg.rank):
            v = Fraction(self.lam_fin[i]) if self.lam_fin else Fraction(0)
            v += sum(fin[j] * alg.cartan[j][i] for j in range(alg.rank))
            vals.append(v)
        return tuple(vals), self.lam_d + lev

    def _act_imag(self, vec, k, key):
        raise ModuleDomainError("no imaginary part in this module")

    def _act_real(self, finite, n, key):
        raise ModuleDomainError("no real root vectors act on this module")

    def act_element(self, el: El, key):
        """Apply an algebra element belonging to this module's algebra."""
        out = {}
        imag = {}
        for mode, coeff in el.terms.items():
            if mode.kind == "c":
                vec_iadd(out, {key: self.charge}, coeff)
            elif mode.kind == "d":
                _, lev = self.disp(key)
                vec_iadd(out, {key: self.lam_d + lev}, coeff)
            elif mode.kind == "h" and mode.n == 0:
                fin, _ = self.disp(key)
                i = mode.payload[0]
                mu = Fraction(self.lam_fin[i]) if self.lam_fin else Fraction(0)
                # displacement contribution: (sum fin_j alpha_j)(h_i)
                mu += sum(fin[j] * (self._cartan_row(j)[i]) for j in range(len(fin)))
                vec_iadd(out, {key: mu}, coeff)
            elif mode.kind == "h":
                bucket = imag.setdefault(mode.n, [Fraction(0)] * self._rank())
                bucket[mode.payload[0]] += coeff
            else:
                vec_iadd(out, self._act_real(mode.payload, mode.n, key), coeff)
        for k, vec in imag.items():
            if any(vec):
                vec_iadd(out, self._act_imag(tuple(vec), k, key))
        return out

    def act_vector(self, el: El, vec):
        out = {}
        for key, c in vec.items():
            vec_iadd(out, self.act_element(el, key), c)
        return out

    def raising_elements(self, bound):
        return []

    def _rank(self):
        return len(self.lam_fin)

    def _cartan_row(self, j):
        return self._cartan[j]


# ---------------------------------------------------------------------------
# Concrete modules over G (+ H)
# ---------------------------------------------------------------------------

class TrivialModule(WeightModule):
    """One-dimensional weight module C_lambda (H acts by lambda, G absent)."""

    def __init__(self, alg: AffineAlgebra, lam_fin, lam_d, charge):
        self.alg = alg
        self._cartan = alg.cartan
        self.lam_fin = tuple(Fraction(x) for x in lam_fin)
        self.lam_d = Fraction(lam_d)
        self.charge = Fraction(charge)
        self._keys = [()]

    def disp(self, key):
        return (0,) * self.alg.rank, 0


class ZeroActionModule(WeightModule):
    """One-dimensional G-module with every oscillator acting as zero (charge 0)."""

    def __init__(self, alg: AffineAlgebra, pairs=None):
        self.alg = alg
        self._cartan = alg.cartan
        self.lam_fin = (Fraction(0),) * alg.rank
        self.lam_d = Fraction(0)
        self.charge = Fraction(0)
        self.pairs = pairs or full_oscillator_pairs(alg)
        self._keys = [()]

    def disp(self, key):
        return (0,) * self.alg.rank, 0

    def _act_imag(self, vec, k, key):
        return {}


class FockModule(WeightModule):
    """Polynomial Fock space over a set of paired oscillators.

    Keys are sorted tuples of creation labels (k, j) with multiplicity; the
    creation level of label (k, j) is -k*side(k, j).  Annihilators act as
    exact scaled derivations; enumeration is truncated by total absolute
    level `depth`, the action itself is not truncated.
    """

    def __init__(self, alg: AffineAlgebra, spec, charge, lam_fin, lam_d, depth,
                 pairs=None):
        self.alg = alg
        self._cartan = alg.cartan
        self.spec = spec
        self.charge = Fraction(charge)
        self.lam_fin = tuple(Fraction(x) for x in lam_fin)
        self.lam_d = Fraction(lam_d)
        self.depth = depth
        self.pairs = dict(pairs) if pairs is not None else full_oscillator_pairs(alg)
        self._keys = self._enumerate()

    # -- enumeration ---------------------------------------------------------

    def _labels(self):
        return [(k, j) for k in range(1, self.depth + 1)
                for j in sorted(self.pairs)]

    def _enumerate(self):
        labels = self._labels()
        out = []

        def rec(prefix, start, budget):
            out.append(tuple(prefix))
            for idx in range(start, len(labels)):
                k, j = labels[idx]
                if k <= budget:
                    prefix.append((k, j))
                    rec(prefix, idx, budget - k)
                    prefix.pop()

        rec([], 0, self.depth)
        out.sort(key=lambda key: (sum(k for k, _ in key), key))
        return out

    # -- weights ---------------------------------------------------------------

    def creation_level(self, k, j):
        return -k * self.spec.side(k, j)

    def disp(self, key):
        lev = sum(self.creation_level(k, j) for k, j in key)
        return (0,) * self.alg.rank, lev

    def abs_depth(self, key):
        return sum(k for k, _ in key)

    # -- action ------------------------------------------------------------------

    def act_pair(self, j, level, key):
        """Action of oscillator x_level^j on a basis key."""
        k = abs(level)
        if level == self.creation_level(k, j):
            return {tuple(sorted(key + ((k, j),))): Fraction(1)}
        # annihilator: remove one matching creation label
        label = (k, j)
        mult = key.count(label)
        if mult == 0:
            return {}
        lst = list(key)
        lst.remove(label)
        return {tuple(lst): mult * level * self.charge}

    def _act_imag(self, vec, k, key):
        # decompose vec over the pair basis at level k via the dual pairing
        out = {}
        residual = list(vec)
        for j in sorted(self.pairs):
            up, down = self.pairs[j]
            probe = down if k > 0 else up
            basis = up if k > 0 else down
            coeff = sum(vec[a] * self.alg.cartan[a][b] * probe[b]
                        for a in range(self.alg.rank)
                        for b in range(self.alg.rank))
            if coeff:
                vec_iadd(out, self.act_pair(j, k, key), coeff)
                for a in range(self.alg.rank):
                    residual[a] -= coeff * basis[a]
        if any(residual):
            raise ModuleDomainError(
                f"level-{k} element outside the module's oscillator span")
        return out

    def raising_elements(self, bound):
        out = []
        for k in range(1, bound + 1):
            for j in sorted(self.pairs):
                level = -self.creation_level(k, j)
                out.append(oscillator_element(self.pairs, j, level))
        return out

    def creation_elements(self, bound):
        out = []
        for k in range(1, bound + 1):
            for j in sorted(self.pairs):
                out.append(oscillator_element(self.pairs, j, self.creation_level(k, j)))
        return out


def fock_module(alg: AffineAlgebra, spec, charge, lam_fin=None, lam_d=0,
                depth=4, pairs=None) -> FockModule:
    """Highest-weight Fock module for the chosen triangular decomposition."""
    if lam_fin is None:
        lam_fin = (Fraction(0),) * alg.rank
    return FockModule(alg, spec, charge, lam_fin, lam_d, depth, pairs)


class DiagonalTensor(WeightModule):
    """Tensor product of two G-modules with the diagonal action (charges add)."""

    def __init__(self, left: WeightModule, right: WeightModule, depth=None):
        self.alg = left.alg
        self._cartan = self.alg.cartan
        self.left = left
        self.right = right
        self.charge = left.charge + right.charge
        self.lam_fin = tuple(a + b for a, b in zip(left.lam_fin, right.lam_fin))
        self.lam_d = left.lam_d + right.lam_d
        keys = [(p, q) for p in left.keys() for q in right.keys()]
        if depth is not None:
            keys = [key for key in keys if abs(self._disp_lev(key)) <= depth]
        keys.sort(key=lambda key: (abs(self._disp_lev(key)), key))
        self._keys = keys

    def _disp_lev(self, key):
        return self.left.disp(key[0])[1] + self.right.disp(key[1])[1]

    def disp(self, key):
        fl, ll = self.left.disp(key[0])
        fr, lr = self.right.disp(key[1])
        return tuple(a + b for a, b in zip(fl, fr)), ll + lr

    def abs_depth(self, key):
        return self.left.abs_depth(key[0]) + self.right.abs_depth(key[1])

    def _act_imag(self, vec, k, key):
        out = {}
        for kk, c in self.left._act_imag(vec, k, key[0]).items():
            vec_iadd(out, {(kk, key[1]): c})
        for kk, c in self.right._act_imag(vec, k, key[1]).items():
            vec_iadd(out, {(key[0], kk): c})
        return out

    def raising_elements(self, bound):
        seen = {}
        for el in self.left.raising_elements(bound) + self.right.raising_elements(bound):
            seen[el.canon()] = el
        return list(seen.values())


class TensorModule(WeightModule):
    """Tensor module M (x) S over a Levi l = l0 + G(l)-perp.

    M is a weight l0-module, S a module over the orthogonal complement
    (plus C d); imaginary elements are split through the parabolic's dual
    pairs, real Levi elements act on M, and the shared center acts once.
    """

    def __init__(self, parab: ParabolicSubalgebra, m_mod: WeightModule,
                 s_mod: WeightModule, depth=None):
        if m_mod.charge != s_mod.charge:
            raise ValueError(
                f"central charge mismatch: {m_mod.charge} vs {s_mod.charge}")
        self.alg = parab.alg
        self._cartan = self.alg.cartan
        self.parab = parab
        self.m_mod = m_mod
        self.s_mod = s_mod
        self.charge = m_mod.charge
        self.lam_fin = m_mod.lam_fin
        self.lam_d = m_mod.lam_d + s_mod.lam_d
        keys = [(p, q) for p in m_mod.keys() for q in s_mod.keys()]
        if depth is not None:
            keys = [key for key in keys if abs(self._disp_lev(key)) <= depth]
        keys.sort(key=lambda key: (abs(self._disp_lev(key)), key))
        self._keys = keys

    def _disp_lev(self, key):
        return self.m_mod.disp(key[0])[1] + self.s_mod.disp(key[1])[1]

    def disp(self, key):
        fm, lm = self.m_mod.disp(key[0])
        fs, ls = self.s_mod.disp(key[1])
        return tuple(a + b for a, b in zip(fm, fs)), lm + ls

    def abs_depth(self, key):
        return self.m_mod.abs_depth(key[0]) + self.s_mod.abs_depth(key[1])

    def _split_imag(self, vec, k):
        """Split a level-k Cartan vector into l0- and perp-components."""
        alg = self.alg
        n = alg.rank
        levi = [Fraction(0)] * n
        perp = [Fraction(0)] * n
        for j in sorted(self.parab.osc_pairs):
            up, down = self.parab.osc_pairs[j]
            probe = down if k > 0 else up
            basis = up if k > 0 else down
            coeff = sum(vec[a] * alg.cartan[a][b] * probe[b]
                        for a in range(n) for b in range(n))
            target = levi if j in self.parab.omega else perp
            for a in range(n):
                target[a] += coeff * basis[a]
        return tuple(levi), tuple(perp)

    def _act_imag(self, vec, k, key):
        levi, perp = self._split_imag(vec, k)
        out = {}
        if any(levi):
            for kk, c in self.m_mod._act_imag(levi, k, key[0]).items():
                vec_iadd(out, {(kk, key[1]): c})
        if any(perp):
            for kk, c in self.s_mod._act_imag(perp, k, key[1]).items():
                vec_iadd(out, {(key[0], kk): c})
        return out

    def _act_real(self, finite, n, key):
        if not self.parab.is_levi_real(finite) and not self.parab.is_levi_real(
                tuple(-c for c in finite)):
            raise ModuleDomainError(f"real mode {finite} not in the Levi")
        out = {}
        for kk, c in self.m_mod._act_real(finite, n, key[0]).items():
            vec_iadd(out, {(kk, key[1]): c})
        return out

    def raising_elements(self, bound):
        out = list(self.m_mod.raising_elements(bound))
        out.extend(self.s_mod.raising_elements(bound))
        return out


def tensor_module(parab, m_mod, s_mod, depth=None) -> TensorModule:
    return TensorModule(parab, m_mod, s_mod, depth)


def diagonal_tensor(left, right, depth=None) -> DiagonalTensor:
    return DiagonalTensor(left, right, depth)


# ---------------------------------------------------------------------------
# Lemma verifier: the two sums
# ---------------------------------------------------------------------------

@dataclass
class TwoSumsReport:
    n_tested: int
    sum_up: dict
    sum_down: dict
    verdict: bool

    def to_json(self):
        from .jsonio import vector_json
        return {"N": self.n_tested, "sum_up": vector_json(self.sum_up),
                "sum_down": vector_json(self.sum_down), "verdict": self.verdict}


def heis_two_sums(s_mod: WeightModule, pairs, osc_index, vectors, offsets, n_value):
    """Evaluate sum_i x_(N-k_i) w_i and sum_i x_(-N-k_i) w_i exactly.

    `vectors` are sparse dicts over s_mod keys, `offsets` the k_i (k_1 = 0,
    strictly increasing), `pairs` the oscillator pairing to draw x from and
    `osc_index` which oscillator line to use per level.
    """
    if offsets[0] != 0 or any(b <= a for a, b in zip(offsets, offsets[1:])):
        raise ValueError("offsets must start at 0 and increase strictly")
    base = None
    for w, k in zip(vectors, offsets):
        if not w:
            raise ValueError("two-sums input vectors must be nonzero")
        disps = {s_mod.disp(key) for key in w}
        if len(disps) != 1:
            raise ValueError("two-sums input vectors must be weight homogeneous")
        fin, lev = disps.pop()
        if base is None:
            base = (fin, lev + k)
        elif base != (fin, lev + k):
            raise ValueError(f"vector at offset {k} violates mu_1 - mu_i = k_i delta")
    sum_up, sum_down = {}, {}
    for w, k in zip(vectors, offsets):
        up_el = oscillator_element(pairs, osc_index, n_value - k)
        down_el = oscillator_element(pairs, osc_index, -n_value - k)
        vec_iadd(sum_up, s_mod.act_vector(up_el, w))
        vec_iadd(sum_down, s_mod.act_vector(down_el, w))
    return TwoSumsReport(n_value, sum_up, sum_down,
                         bool(sum_up) or bool(sum_down))


# ---------------------------------------------------------------------------
# Admissibility check
# ---------------------------------------------------------------------------

@dataclass
class AdmissibilityReport:
    level: int
    verdict: str                    # admissible-in-box | not-admissible | inconclusive
    witness: tuple = None
    details: list = field(default_factory=list)


def check_admissible(s_mod: WeightModule, pairs, level, max_degree=4):
    """Box-scoped one-sided surjectivity check for the level-k slice.

    For each cyclic submodule generated by a basis key, tests whether some
    fixed side sigma admits, for every pair of spanning vectors (v1, v2), a
    candidate v with both v_i in the span of degree <= max_degree words of
    the sigma-side oscillators applied to v.
    """
    keys = s_mod.keys()
    index = {k: i for i, k in enumerate(keys)}
    oscs = {+1: [oscillator_element(pairs, j, level) for j in sorted(pairs)],
            -1: [oscillator_element(pairs, j, -level) for j in sorted(pairs)]}

    def to_row(vec):
        row = [Fraction(0)] * len(keys)
        ok = True
        for k, c in vec.items():
            if k in index:
                row[index[k]] = Fraction(c)
            else:
                ok = False
        return row, ok

    def in_box(vec):
        return all(k in index for k in vec)

    def span_vectors(start):
        """Spanning set of U(G_level)-words applied to start, inside the box.

        Words whose result leaves the enumerated box are skipped; the verdict
        is box-scoped by contract.
        """
        rows, vecs = [], []
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                if not in_box(v):
                    continue
                row, _ = to_row(v)
                if any(row) and not linalg.in_row_span(rows, row):
                    rows.append(row)
                    vecs.append(v)
                    for el in oscs[+1] + oscs[-1]:
                        nv = s_mod.act_vector(el, v)
                        if nv:
                            nxt.append(nv)
            frontier = nxt
        return vecs, rows

    def one_side_span(v, sigma):
        rows = []
        layer = [v]
        for _ in range(max_degree + 1):
            nxt = []
            for w in layer:
                row, _ = to_row(w)
                if any(row) and not linalg.in_row_span(rows, row):
                    rows.append(row)
                for el in oscs[sigma]:
                    nw = s_mod.act_vector(el, w)
                    if nw:
                        nxt.append(nw)
            layer = nxt
        return rows

    if not keys:
        return AdmissibilityReport(level, "inconclusive")
    details = []
    for gen in keys:
        vecs, rows = span_vectors({gen: Fraction(1)})
        ok_side = {}
        witness = None
        for sigma in (+1, -1):
            ok = True
            for i1 in range(len(vecs)):
                for i2 in range(i1, len(vecs)):
                    found = False
                    for cand in vecs:
                        span = one_side_span(cand, sigma)
                        if linalg.in_row_span(span, rows[i1]) and \
                                linalg.in_row_span(span, rows[i2]):
                            found = True
                            break
                    if not found:
                        ok = False
                        witness = (vecs[i1], vecs[i2], sigma)
                if not ok:
                    break
            ok_side[sigma] = ok
        details.append((gen, ok_side[+1] or ok_side[-1]))
        if not (ok_side[+1] or ok_side[-1]):
            return AdmissibilityReport(level, "not-admissible", witness, details)
    return AdmissibilityReport(level, "admissible-in-box", None, details)
