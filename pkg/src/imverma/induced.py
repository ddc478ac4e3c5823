"""Truncated generalized imaginary Verma modules and their certificates.

An induced module is realized on its PBW basis: monomials in a fixed ordered
list of opposite-radical generators times a basis key of the inducing module.
Actions are computed by commuting elements leftward through the monomial with
the exact algebra bracket; components that leave the enumeration box are
dropped and flagged, and certificates report any weight space whose matrices
touched a flagged result as inconclusive.
"""

from bisect import insort
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .core_algebra import AffineAlgebra, El, Mode, cartan_mode, real_mode
from .heisenberg_fock import ModuleDomainError, WeightModule, vec_iadd
from .partitions import ParabolicSubalgebra


class BoxOverflow(Exception):
    """An action result left the enumeration box."""


@dataclass(frozen=True)
class BoxSpec:
    """Truncation data for an induced module.

    depth: bound on |delta-level displacement| of a basis key.
    height: bound on the u-bar height of the PBW monomial.
    gen_window: bound on |level| of each opposite-radical generator.
    abs_depth: bound on the sum of |level| over monomial factors (with the
        inducing key's own depth), needed to keep phi-twisted boxes finite.
    finite_caps: optional per-simple-root cap on |finite displacement|.
    """
    depth: int
    height: int
    gen_window: int = None
    abs_depth: int = None
    finite_caps: tuple = None

    def resolved(self):
        gw = self.gen_window if self.gen_window is not None else self.depth
        ab = self.abs_depth if self.abs_depth is not None else max(gw, self.depth)
        return BoxSpec(self.depth, self.height, gw, ab, self.finite_caps)

    def to_json(self):
        return {"depth": self.depth, "height": self.height,
                "gen_window": self.gen_window, "abs_depth": self.abs_depth,
                "finite_caps": (list(self.finite_caps) if self.finite_caps else None)}


@dataclass(frozen=True)
class Generator:
    """One opposite-radical PBW generator."""
    index: int
    element: El
    fin: tuple          # finite weight displacement
    level: int
    uheight: int
    label: str



def uheight_of_fin(parab, fin):
    """Height of a finite displacement over the radical's simple supports."""
    omega_ubar = parab.real_support - parab.omega
    return sum(-fin[j] for j in omega_ubar)


def build_ubar_data(alg, parab, window):
    """Ordered PBW generators of the opposite radical within a level window.

    Returns (gens, real_lookup, imag_lookup): real_lookup maps (finite, level)
    to a generator index, imag_lookup maps a level to (first index, vectors).
    """
    raw = []
    for r in parab.ubar_real_roots(window):
        el = El.of(real_mode(r.finite, r.level))
        ht = uheight_of_fin(parab, r.finite)
        raw.append((r.level, 0, tuple(r.finite), el, ht,
                    f"x{list(r.finite)}@{r.level}"))
    for k in range(-window, window + 1):
        if k == 0:
            continue
        for vi, vec in enumerate(parab.ubar_imag_vectors(k)):
            el = El({cartan_mode(i, k): Fraction(c)
                     for i, c in enumerate(vec) if c})
            raw.append((k, 1, (vi,), el, 0, f"osc{vi}@{k}"))
    raw.sort(key=lambda t: (t[0], t[1], t[2]))
    zero = (0,) * alg.rank
    gens = []
    for idx, (lev, isimag, payload, el, ht, label) in enumerate(raw):
        fin = zero if isimag else payload
        gens.append(Generator(idx, el, fin, lev, ht, label))
    real_lookup = {}
    imag_lookup = {}
    for g in gens:
        if any(g.fin):
            real_lookup[(g.fin, g.level)] = g.index
    for k in range(-window, window + 1):
        if k == 0:
            continue
        vecs = parab.ubar_imag_vectors(k)
        base = None
        for g in gens:
            if not any(g.fin) and g.level == k:
                base = g.index
                break
        if vecs and base is not None:
            imag_lookup[k] = (base, vecs)
    return gens, real_lookup, imag_lookup


class InducedModule(WeightModule):
    """U(g)-module induced from a parabolic datum and an inducing module.

    Doubles as a weight module over its own parabolic's algebra, so an
    induced module over a Levi's l0-part can serve as the M-factor of a
    tensor module.
    """

    def __init__(self, alg: AffineAlgebra, parab: ParabolicSubalgebra,
                 v_mod: WeightModule, box: BoxSpec):
        self.alg = alg
        self._cartan = alg.cartan
        self.parab = parab
        self.v_mod = v_mod
        self.box = box.resolved()
        self.charge = v_mod.charge
        self.lam_fin = v_mod.lam_fin
        self.lam_d = v_mod.lam_d
        self._check_u_kills_v()
        self._build_generators()
        self._build_keys()
        self._act_cache = {}
        self._mul_cache = {}

    # -- construction ----------------------------------------------------------

    def _check_u_kills_v(self):
        """Reject inducing data whose radical does not annihilate V.

        The inducing module never defines radical modes, so it suffices that
        it is defined over the Levi only; a module that answers a radical
        element without a domain error is not a valid input.
        """
        probe = self.parab.u_real_roots(1)[:2]
        for r in probe:
            try:
                self.v_mod._act_real(r.finite, r.level, self.v_mod.keys()[0])
            except ModuleDomainError:
                continue
            except Exception:
                continue
            raise ValueError("inducing module acts by radical modes; "
                             "u-hat V = 0 is violated")

    def _build_generators(self):
        self.gens, self._real_gen, self._imag_gen = \
            build_ubar_data(self.alg, self.parab, self.box.gen_window)

    def _gen_disp(self, mono):
        fin = [0] * self.alg.rank
        lev = 0
        for gi in mono:
            g = self.gens[gi]
            for i, c in enumerate(g.fin):
                fin[i] += c
            lev += g.level
        return tuple(fin), lev

    def _mono_ok(self, mono, vkey):
        box = self.box
        ht = sum(self.gens[gi].uheight for gi in mono)
        if ht > box.height:
            return False
        vfin, vlev = self.v_mod.disp(vkey)
        fin, lev = self._gen_disp(mono)
        total_lev = lev + vlev
        if abs(total_lev) > box.depth:
            return False
        absd = sum(abs(self.gens[gi].level) for gi in mono) \
            + self.v_mod.abs_depth(vkey)
        if absd > box.abs_depth:
            return False
        if box.finite_caps:
            for j in range(self.alg.rank):
                if abs(fin[j] + vfin[j]) > box.finite_caps[j]:
                    return False
        return True

    def _build_keys(self):
        keys = []
        vkeys = self.v_mod.keys()
        gens = self.gens

        def rec(prefix, start):
            for vkey in vkeys:
                if self._mono_ok(prefix, vkey):
                    keys.append((tuple(prefix), vkey))
            for gi in range(start, len(gens)):
                prefix.append(gi)
                if any(self._mono_ok(prefix, vk) for vk in vkeys):
                    rec(prefix, gi)
                prefix.pop()

        rec([], 0)
        keys.sort(key=lambda key: (sum(self.gens[g].uheight for g in key[0]),
                                   -self.disp(key)[1], key))
        self._keys = keys
        self._key_set = set(keys)

    # -- weights -----------------------------------------------------------------

    def disp(self, key):
        mono, vkey = key
        fin, lev = self._gen_disp(mono)
        vfin, vlev = self.v_mod.disp(vkey)
        return tuple(a + b for a, b in zip(fin, vfin)), lev + vlev

    def abs_depth(self, key):
        mono, vkey = key
        return sum(abs(self.gens[gi].level) for gi in mono) \
            + self.v_mod.abs_depth(vkey)

    def generator_key(self):
        return ((), self.v_mod.keys()[0])

    def u_height(self, arg):
        """u-bar height of a key or of a weight-homogeneous vector."""
        if isinstance(arg, dict):
            hts = {self.u_height(k) for k in arg}
            if len(hts) > 1:
                raise ValueError("vector is not u-height homogeneous")
            return hts.pop() if hts else 0
        mono, _ = arg
        return sum(self.gens[gi].uheight for gi in mono)

    def character(self):
        """Exact multiplicity of every weight in the box."""
        out = {}
        for key in self._keys:
            d = self.disp(key)
            out[d] = out.get(d, 0) + 1
        return out

    # -- decomposition into generators + Levi part --------------------------------

    def _decompose(self, el: El):
        """Split an element into generator coordinates, a Levi part, and a
        dropped-radical part; clean=False if a component misses the window."""
        coords = []
        levi = {}
        clean = True
        imag = {}
        for mode, coeff in el.terms.items():
            if mode.kind in ("c", "d") or (mode.kind == "h" and mode.n == 0):
                levi[mode] = levi.get(mode, 0) + coeff
            elif mode.kind == "h":
                bucket = imag.setdefault(mode.n, [Fraction(0)] * self.alg.rank)
                bucket[mode.payload[0]] += coeff
            else:
                fin = mode.payload
                if not self.parab.in_algebra(fin):
                    raise ModuleDomainError(f"mode {mode} outside the algebra")
                if self.parab.is_ubar_real(fin):
                    gi = self._real_gen.get((fin, mode.n))
                    if gi is None:
                        clean = False
                    else:
                        coords.append((gi, coeff))
                elif self.parab.is_levi_real(fin):
                    levi[mode] = levi.get(mode, 0) + coeff
                # radical part kills pure V-vectors: dropped
        alg = self.alg
        for k, vec in imag.items():
            if not any(vec):
                continue
            residual = list(vec)
            for j in sorted(self.parab.osc_pairs):
                up, down = self.parab.osc_pairs[j]
                probe = down if k > 0 else up
                basis = up if k > 0 else down
                c = sum(vec[a] * alg.cartan[a][b] * probe[b]
                        for a in range(alg.rank) for b in range(alg.rank))
                if not c:
                    continue
                for a in range(alg.rank):
                    residual[a] -= c * basis[a]
                if j in self.parab.levi_osc:
                    for i, bc in enumerate(basis):
                        if bc:
                            m = cartan_mode(i, k)
                            levi[m] = levi.get(m, 0) + c * bc
                else:
                    side = self.parab.split.side(abs(k), j)
                    on_ubar = (k > 0) != (side > 0)
                    if on_ubar:
                        vecs = self.parab.ubar_imag_vectors(k)
                        target = None
                        for vi, w in enumerate(vecs):
                            if w == basis:
                                target = vi
                        gi = self._imag_gen.get(k)
                        if gi is None or target is None:
                            clean = False
                        else:
                            coords.append((gi[0] + target, c))
                    # radical side: kills pure V-vectors
            if any(residual):
                raise ModuleDomainError(f"level-{k} component outside the algebra")
        return coords, El(levi), clean

    # -- multiplication by a generator ---------------------------------------------

    def _mul_gen(self, gi, key):
        memo = self._mul_cache.get((gi, key))
        if memo is not None:
            return memo
        mono, vkey = key
        if not mono or gi <= mono[0]:
            nk = ((gi,) + mono, vkey)
            if nk in self._key_set:
                res = ({nk: Fraction(1)}, True)
            else:
                res = ({}, False)
        else:
            head, rest = mono[0], (mono[1:], vkey)
            out = {}
            clean = True
            sub, c1 = self._mul_gen(gi, rest)
            clean &= c1
            for k2, c in sub.items():
                got, c2 = self._mul_gen(head, k2)
                clean &= c2
                vec_iadd(out, got, c)
            br = self.alg.bracket(self.gens[gi].element, self.gens[head].element)
            if br:
                coords, levi, c3 = self._decompose(br)
                clean &= c3
                if levi:
                    raise AssertionError("opposite radical is not bracket closed")
                for gj, c in coords:
                    got, c4 = self._mul_gen(gj, rest)
                    clean &= c4
                    vec_iadd(out, got, c)
            res = (out, clean)
        self._mul_cache[(gi, key)] = res
        return res

    def _mul_gen_vec(self, gi, vec):
        out = {}
        clean = True
        for key, c in vec.items():
            got, ok = self._mul_gen(gi, key)
            clean &= ok
            vec_iadd(out, got, c)
        return out, clean

    # -- the action ---------------------------------------------------------------

    def act(self, el, key):
        """Apply an algebra element to a basis key.  Returns (vector, clean)."""
        if isinstance(el, Mode):
            el = El.of(el)
        if not el:
            return {}, True
        memo_key = (el.canon(), key)
        memo = self._act_cache.get(memo_key)
        if memo is not None:
            return memo
        out = {}
        clean = True
        # diagonal part: c, d, level-zero Cartan
        diag = Fraction(0)
        rest = {}
        fin, lev = None, None
        for mode, coeff in el.terms.items():
            if mode.kind == "c":
                diag += coeff * self.charge
            elif mode.kind == "d":
                if fin is None:
                    fin, lev = self.disp(key)
                diag += coeff * (self.lam_d + lev)
            elif mode.kind == "h" and mode.n == 0:
                if fin is None:
                    fin, lev = self.disp(key)
                i = mode.payload[0]
                mu = Fraction(self.lam_fin[i])
                mu += sum(fin[j] * self.alg.cartan[j][i]
                          for j in range(self.alg.rank))
                diag += coeff * mu
            else:
                rest[mode] = coeff
        if diag:
            vec_iadd(out, {key: diag})
        if rest:
            relm = El(rest)
            mono, vkey = key
            if not mono:
                coords, levi, c0 = self._decompose(relm)
                clean &= c0
                for gi, c in coords:
                    nk = ((gi,), vkey)
                    if nk in self._key_set:
                        vec_iadd(out, {nk: c})
                    else:
                        clean = False
                if levi:
                    try:
                        vres = self.v_mod.act_element(levi, vkey)
                    except BoxOverflow:
                        vres = {}
                        clean = False
                    for vk, c in vres.items():
                        nk = ((), vk)
                        if nk in self._key_set:
                            vec_iadd(out, {nk: c})
                        else:
                            clean = False
            else:
                head = mono[0]
                sub = (mono[1:], vkey)
                inner, c1 = self.act(relm, sub)
                clean &= c1
                got, c2 = self._mul_gen_vec(head, inner)
                clean &= c2
                vec_iadd(out, got)
                br = self.alg.bracket(relm, self.gens[head].element)
                if br:
                    got2, c3 = self.act(br, sub)
                    clean &= c3
                    vec_iadd(out, got2)
        res = (out, clean)
        self._act_cache[memo_key] = res
        return res

    def act_vector(self, el, vec):
        out = {}
        clean = True
        for key, c in vec.items():
            got, ok = self.act(el, key)
            clean &= ok
            vec_iadd(out, got, c)
        return out, clean

    # -- WeightModule protocol (for use as an inner inducing module) ---------------

    def act_element(self, el, key):
        vec, clean = self.act(el, key)
        if not clean:
            raise BoxOverflow("inner induced module action left its box")
        return vec

    def _act_imag(self, vec, k, key):
        el = El({cartan_mode(i, k): Fraction(c) for i, c in enumerate(vec) if c})
        return self.act_element(el, key)

    def _act_real(self, finite, n, key):
        if not self.parab.in_algebra(finite):
            raise ModuleDomainError(f"real mode {finite} outside the algebra")
        return self.act_element(El.of(real_mode(finite, n)), key)

    # -- raising data ----------------------------------------------------------------

    def raising_elements(self, bound, labeled=False):
        """Radical modes within the bound plus the inducing module's raising set."""
        out = []
        pos = set(self.alg.finite_positive)
        for fin in sorted(pos):
            if not self.parab.is_u_real(fin):
                continue
            for n in range(-bound, bound + 1):
                out.append((f"x{list(fin)}@{n}", El.of(real_mode(fin, n))))
        for k in range(-bound, bound + 1):
            if k == 0:
                continue
            for vi, vec in enumerate(self.parab.u_imag_vectors(k)):
                el = El({cartan_mode(i, k): Fraction(c)
                         for i, c in enumerate(vec) if c})
                out.append((f"u-osc{vi}@{k}", el))
        for i, el in enumerate(self.v_mod.raising_elements(bound)):
            out.append((f"V-raise{i}", el))
        if labeled:
            return out
        return [el for _, el in out]


def induce(alg, parab, v_mod, box: BoxSpec) -> InducedModule:
    return InducedModule(alg, parab, v_mod, box)


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------

@dataclass
class Certificate:
    kind: str
    box: dict
    raising: list
    weights: list = field(default_factory=list)
    conclusive: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return {"kind": self.kind, "box": self.box, "raising": self.raising,
                "weights": self.weights, "conclusive": self.conclusive,
                **self.extra}


def _weight_spaces(module: InducedModule, check):
    spaces = {}
    for key in module.keys():
        if check(key):
            spaces.setdefault(module.disp(key), []).append(key)
    return spaces


def _in_check_box(module, depth, height, mode_bound, finite_caps=None):
    abs_bound = module.box.abs_depth - mode_bound

    def check(key):
        fin, lev = module.disp(key)
        if abs(lev) > depth:
            return False
        if module.u_height(key) > height:
            return False
        if module.abs_depth(key) > abs_bound:
            return False
        if finite_caps:
            for j, cap in enumerate(finite_caps):
                if abs(fin[j]) > cap:
                    return False
        return True
    return check


def singular_vectors(module: InducedModule, depth, height, mode_bound,
                     finite_caps=None) -> Certificate:
    """Exact nullspace of all raising modes on every boxed weight space."""
    from .jsonio import rat_str
    ops = module.raising_elements(mode_bound, labeled=True)
    spaces = _weight_spaces(module, _in_check_box(module, depth, height,
                                                  mode_bound, finite_caps))
    weights = []
    conclusive = True
    for disp in sorted(spaces):
        keys = spaces[disp]
        rows_by_target = {}
        clean = True
        for oi, (_, el) in enumerate(ops):
            for ci, key in enumerate(keys):
                vec, ok = module.act(el, key)
                clean &= ok
                for tk, c in vec.items():
                    row = rows_by_target.setdefault((oi, tk), [Fraction(0)] * len(keys))
                    row[ci] = c
        null = linalg.nullspace(list(rows_by_target.values()), ncols=len(keys))
        conclusive &= clean
        entry = {
            "weight": [list(disp[0]), disp[1]],
            "dim": len(keys),
            "nullity": len(null),
            "conclusive": clean,
        }
        if null:
            entry["witnesses"] = [
                {"basis": [repr(k) for k in keys],
                 "coeffs": [rat_str(c) for c in v]} for v in null]
            entry["witness_keys"] = [
                [repr(k) for k, c in zip(keys, v) if c] for v in null]
        weights.append(entry)
    singular = [w for w in weights if w["nullity"]]
    return Certificate(
        "SingularList",
        {"depth": depth, "height": height, "mode_bound": mode_bound,
         "finite_caps": list(finite_caps) if finite_caps else None},
        [label for label, _ in ops],
        weights, conclusive,
        {"singular_weights": [w["weight"] for w in singular],
         "total_nullity": sum(w["nullity"] for w in singular)})


def only_generator_singular(cert: Certificate) -> bool:
    """True when the certificate reports exactly the generator line."""
    sw = cert.extra["singular_weights"]
    if not cert.conclusive or cert.extra["total_nullity"] != 1 or len(sw) != 1:
        return False
    fin, lev = sw[0]
    return all(c == 0 for c in fin) and lev == 0


def cyclicity_certificate(module: InducedModule, depth, height, mode_bound,
                          max_nodes=4000, finite_caps=None) -> Certificate:
    """Search a U(g)-word taking each boxed basis vector to the generator.

    Best-first over raising-mode applications; each certificate entry lists
    the word found (generator labels, leftmost applied last) or reports
    failure for that key.
    """
    ops = module.raising_elements(mode_bound, labeled=True)
    gen_key = module.generator_key()
    spaces = _weight_spaces(module, _in_check_box(module, depth, height,
                                                  mode_bound, finite_caps))
    entries = []
    all_ok = True

    def norm(vec):
        items = tuple(sorted(vec.items()))
        if not items:
            return items
        lead = items[0][1]
        return tuple((k, c / lead) for k, c in items)

    def score(vec):
        s = None
        for (mono, vk) in vec:
            fin, lev = module.disp((mono, vk))
            v = (len(mono) + sum(abs(x) for x in fin), abs(lev))
            s = v if s is None else min(s, v)
        return s

    for disp in sorted(spaces):
        for key in spaces[disp]:
            if key == gen_key:
                entries.append({"key": repr(key), "word": []})
                continue
            start = {key: Fraction(1)}
            frontier = [((0, 0), start, [])]
            seen = {norm(start)}
            found = None
            nodes = 0
            while frontier and found is None and nodes < max_nodes:
                frontier.sort(key=lambda t: t[0])
                _, vec, word = frontier.pop(0)
                nodes += 1
                for label, el in ops:
                    nxt, _ = module.act_vector(el, vec)
                    if not nxt:
                        continue
                    if nxt.get(gen_key):
                        found = [label] + word
                        break
                    nn = norm(nxt)
                    if nn in seen or len(word) > 2 * (depth + height) + 4:
                        continue
                    seen.add(nn)
                    frontier.append((score(nxt), nxt, [label] + word))
            entries.append({"key": repr(key), "word": found})
            if found is None:
                all_ok = False
    return Certificate(
        "Cyclicity",
        {"depth": depth, "height": height, "mode_bound": mode_bound,
         "finite_caps": list(finite_caps) if finite_caps else None},
        [label for label, _ in ops],
        entries, True,
        {"all_cyclic": all_ok,
         "failures": [e["key"] for e in entries if e["word"] is None]})
