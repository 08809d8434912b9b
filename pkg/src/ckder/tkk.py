"""Lie superalgebra constructions over the Jordan layer.

Builds the bracket structure on three tensor copies of a Jordan
superalgebra against skew-symmetric 3 x 3 matrices plus a derivation
algebra, the 3-graded Tits-Kantor-Koecher superalgebra, the explicit
identification between the two through a split sl2 triple, and the
realization of the big derivation algebra as such a construction over
the rank-2 double.
"""

from dataclasses import dataclass

import numpy as np

from .constructions import ChengKac, KantorDouble
from .derivations import DerivationSpace, grade_derivations
from .linalg import amod, inverse, iszero, rank, solve_right
from .superalg import (LinearMap, SuperAlgebra, Verdict, is_homomorphism,
                       super_commutator)
from .symmetry import CoordinateAlgebra, CoordinateTransfer, S4Action, \
    conjugate_der


class LieSuperAlgebra(SuperAlgebra):
    """A superalgebra whose product is a super bracket, with an
    optional 3-grading tag (-1, 0, +1) per basis vector."""

    def __init__(self, field, dim_even, dim_odd, labels, brackets,
                 grading=None):
        super().__init__(field, dim_even, dim_odd, labels, brackets)
        self.grading = list(grading) if grading is not None else None

    @property
    def brackets(self):
        return self.products

    def to_json(self) -> dict:
        obj = super().to_json()
        obj["brackets"] = obj.pop("products")
        del obj["unit"]
        del obj["fine_label"]
        obj["grading"] = self.grading
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "LieSuperAlgebra":
        from .field import FieldSpec
        f = FieldSpec.from_json(obj["field"])
        brs = {(int(i), int(j)): [(int(k), f.scalar_from_json(c))
                                  for k, c in terms]
               for i, j, terms in obj["brackets"]}
        return cls(f, int(obj["dim_even"]), int(obj["dim_odd"]),
                   obj["labels"], brs, obj.get("grading"))


def check_3grading(lie: LieSuperAlgebra) -> Verdict:
    """Brackets of tagged vectors must land in the summed tag, and be
    zero once the sum leaves {-1, 0, 1}."""
    if lie.grading is None:
        return Verdict(False, {"reason": "no grading tags"})
    g = lie.grading
    for (i, j), terms in lie.products.items():
        s = g[i] + g[j]
        if abs(s) > 1 and terms:
            return Verdict(False, {"pair": (lie.labels[i], lie.labels[j]),
                                   "reason": "nonzero bracket outside the "
                                   "grading range"})
        for k, _ in terms:
            if g[k] != s:
                return Verdict(False, {"pair": (lie.labels[i], lie.labels[j]),
                                       "lands_on": lie.labels[k]})
    return Verdict(True)


_E_MATRICES = (
    np.array([[0, 0, 0], [0, 0, -1], [0, 1, 0]], dtype=np.complex128),
    np.array([[0, 0, 1], [0, 0, 0], [-1, 0, 0]], dtype=np.complex128),
    np.array([[0, -1, 0], [1, 0, 0], [0, 0, 0]], dtype=np.complex128),
)


def so3(field) -> LieSuperAlgebra:
    """The skew-symmetric 3 x 3 matrices, with the cyclic basis whose
    brackets read off the next basis element.

    The returned algebra carries the concrete matrices and the trace
    form, which is -2 times the identity; both facts are rechecked on
    every call."""
    brackets = {}
    for i in range(3):
        j = (i + 1) % 3
        k = (i + 2) % 3
        brackets[(i, j)] = [(k, 1)]
        brackets[(j, i)] = [(k, -1)]
    lie = LieSuperAlgebra(field, 3, 0, ["E1", "E2", "E3"], brackets)
    lie.matrices = _E_MATRICES
    tf = np.zeros((3, 3), dtype=np.complex128)
    for i in range(3):
        for j in range(3):
            tf[i, j] = np.trace(_E_MATRICES[i] @ _E_MATRICES[j])
            comm = _E_MATRICES[i] @ _E_MATRICES[j] \
                - _E_MATRICES[j] @ _E_MATRICES[i]
            want = sum(c * _E_MATRICES[k]
                       for k, c in brackets.get((i, j), []))
            if not np.array_equal(comm, want if brackets.get((i, j))
                                  else np.zeros((3, 3))):
                raise AssertionError("matrix model broke its own table")
    if not np.array_equal(tf, -2 * np.eye(3)):
        raise AssertionError("trace form is not -2 times the identity")
    lie.trace_form = amod(field, tf)
    return lie


class TitsAlgebra(LieSuperAlgebra):
    """Bracket structure on (so3 tensor J) + d, with index helpers."""

    def __init__(self, field, dim_even, dim_odd, labels, brackets,
                 jalg, dspace):
        super().__init__(field, dim_even, dim_odd, labels, brackets)
        self.jalg = jalg
        self.dspace = dspace

    def idx_tensor(self, i: int, a: int) -> int:
        n0 = self.jalg.dim_even
        if a < n0:
            return i * n0 + a
        return self.dim_even + i * (self.jalg.n - n0) + (a - n0)

    def idx_der(self, parity: int, k: int) -> int:
        if parity == 0:
            return 3 * self.jalg.dim_even + k
        return self.dim_even + 3 * (self.jalg.n - self.jalg.dim_even) + k


def tits_construction(jalg: SuperAlgebra, dspace: DerivationSpace,
                      inder: DerivationSpace | None = None) -> TitsAlgebra:
    """The Lie superalgebra on (so3 tensor J) + d.

    Brackets: two tensors bracket through the so3 bracket on the matrix
    side and the Jordan product on the other, plus half the trace form
    times the inner derivation; d acts on tensors componentwise.

    Preconditions checked: the inner derivations sit inside d and d is
    closed under the super commutator.  Either failure raises.
    """
    from .derivations import inner_derivation_algebra
    f = jalg.field
    n = jalg.n
    n0 = jalg.dim_even
    n1 = n - n0
    if inder is None:
        inder = inner_derivation_algebra(jalg)
    for par in (0, 1):
        if not dspace.subspace(par).contains(inder.subspace(par)):
            raise ValueError("derivation space misses inner derivations")
    dbasis = [(0, m) for m in dspace.even_basis] + \
             [(1, m) for m in dspace.odd_basis]
    for _, d1 in dbasis:
        for _, d2 in dbasis:
            if not dspace.contains_map(super_commutator(d1, d2)):
                raise ValueError("derivation space is not bracket closed")

    m0, m1 = dspace.dims
    dim_even = 3 * n0 + m0
    dim_odd = 3 * n1 + m1
    labels = [f"E{i + 1}*{jalg.labels[a]}" for i in range(3)
              for a in range(n0)]
    labels += [f"d{k}" for k in range(m0)]
    labels += [f"E{i + 1}*{jalg.labels[a]}" for i in range(3)
               for a in range(n0, n)]
    labels += [f"d{m0 + k}" for k in range(m1)]

    def idx_tensor(i, a):
        return i * n0 + a if a < n0 else dim_even + i * n1 + (a - n0)

    def idx_der(par, k):
        return 3 * n0 + k if par == 0 else dim_even + 3 * n1 + k

    par_j = jalg.parities
    so3_bracket = {}
    for i in range(3):
        so3_bracket[(i, (i + 1) % 3)] = (((i + 2) % 3), 1)
        so3_bracket[((i + 1) % 3, i)] = (((i + 2) % 3), -1)

    dcoords = {}

    def der_coords(mat, par):
        key = (mat.tobytes(), par)
        if key not in dcoords:
            flat = mat.flatten(order="F")
            co = dspace.subspace(par).coords_of(flat)
            if co is None:
                raise ValueError("inner derivation escapes the given space")
            dcoords[key] = co
        return dcoords[key]

    from .superalg import inner_derivation
    brackets = {}

    def put(i, j, terms):
        terms = [(k, c) for k, c in terms if f.reduce(c) != 0]
        if terms:
            brackets[(i, j)] = brackets.get((i, j), []) + terms

    for a in range(n):
        for b in range(n):
            prod = jalg.products.get((a, b), [])
            dmap = inner_derivation(jalg, jalg.basis_vector(a),
                                    jalg.basis_vector(b))
            par = (par_j[a] + par_j[b]) % 2
            co = der_coords(amod(f, dmap.matrix), par)
            dterms = [(idx_der(par, t), -co[t])
                      for t in range(len(co)) if co[t] != 0]
            for i in range(3):
                for j in range(3):
                    terms = []
                    if (i, j) in so3_bracket:
                        kE, sgn = so3_bracket[(i, j)]
                        terms = [(idx_tensor(kE, k), sgn * c)
                                 for k, c in prod]
                    if i == j:
                        terms = terms + dterms
                    put(idx_tensor(i, a), idx_tensor(j, b), terms)

    for t, (pd, dmap) in enumerate(dbasis):
        kd_ = t if pd == 0 else t - m0
        di = idx_der(pd, kd_)
        for i in range(3):
            for a in range(n):
                col = dmap.matrix[:, a]
                terms = [(idx_tensor(i, r), col[r])
                         for r in range(n) if col[r] != 0]
                put(di, idx_tensor(i, a), terms)
                sgn = -1.0 if (pd and par_j[a]) else 1.0
                put(idx_tensor(i, a), di,
                    [(k, -sgn * c) for k, c in terms])

    for t1, (p1, d1) in enumerate(dbasis):
        for t2, (p2, d2) in enumerate(dbasis):
            br = super_commutator(d1, d2)
            co = der_coords(amod(f, br.matrix), br.parity)
            i1 = idx_der(p1, t1 if p1 == 0 else t1 - m0)
            i2 = idx_der(p2, t2 if p2 == 0 else t2 - m0)
            put(i1, i2, [(idx_der(br.parity, t), c)
                         for t, c in enumerate(co) if c != 0])

    return TitsAlgebra(f, dim_even, dim_odd, labels, brackets, jalg, dspace)


class TkkAlgebra(LieSuperAlgebra):
    """3-graded bracket structure on two shifted copies of J plus its
    structure algebra, with index helpers."""

    def __init__(self, field, dim_even, dim_odd, labels, brackets,
                 grading, jalg, inder):
        super().__init__(field, dim_even, dim_odd, labels, brackets,
                         grading)
        self.jalg = jalg
        self.inder = inder

    def _block(self, which: int, a: int) -> int:
        n0 = self.jalg.dim_even
        if a < n0:
            return which * n0 + a
        n1 = self.jalg.n - n0
        return self.dim_even + which * n1 + (a - n0)

    def idx_plus(self, a: int) -> int:
        return self._block(0, a)

    def idx_minus(self, a: int) -> int:
        return self._block(1, a)

    def idx_lmult(self, a: int) -> int:
        return self._block(2, a)

    def idx_der(self, parity: int, k: int) -> int:
        if parity == 0:
            return 3 * self.jalg.dim_even + k
        return self.dim_even + 3 * (self.jalg.n - self.jalg.dim_even) + k


def tkk_3graded(jalg: SuperAlgebra,
                inder: DerivationSpace | None = None) -> TkkAlgebra:
    """The 3-graded Lie superalgebra on J_+1, J_-1 and the structure
    algebra L_J + Inder(J).

    The left-multiplication block and the inner-derivation block are
    kept separate; their intersection is checked to be zero rather
    than assumed (for a unital algebra a left multiplication never
    kills the unit unless it is zero)."""
    from .derivations import inner_derivation_algebra
    from .superalg import inner_derivation
    f = jalg.field
    n = jalg.n
    n0 = jalg.dim_even
    n1 = n - n0
    if jalg.unit_index is None:
        raise ValueError("the construction needs a unital algebra")
    if inder is None:
        inder = inner_derivation_algebra(jalg)
    m0, m1 = inder.dims

    lmats = [jalg.left_mult(jalg.basis_vector(a)).matrix for a in range(n)]
    stacked = np.stack(
        [m.flatten(order="F") for m in lmats]
        + [d.flatten() for d in inder.even_basis + inder.odd_basis])
    if rank(f, stacked) != n + m0 + m1:
        raise ValueError("multiplication operators overlap the inner "
                         "derivations")

    dim_even = 3 * n0 + m0
    dim_odd = 3 * n1 + m1

    def idx_plus(a):
        return a if a < n0 else dim_even + (a - n0)

    def idx_minus(a):
        return n0 + a if a < n0 else dim_even + n1 + (a - n0)

    def idx_lmult(a):
        return 2 * n0 + a if a < n0 else dim_even + 2 * n1 + (a - n0)

    def idx_der(par, k):
        return 3 * n0 + k if par == 0 else dim_even + 3 * n1 + k

    labels = [f"{jalg.labels[a]}(+)" for a in range(n0)]
    labels += [f"{jalg.labels[a]}(-)" for a in range(n0)]
    labels += [f"L[{jalg.labels[a]}]" for a in range(n0)]
    labels += [f"d{k}" for k in range(m0)]
    labels += [f"{jalg.labels[a]}(+)" for a in range(n0, n)]
    labels += [f"{jalg.labels[a]}(-)" for a in range(n0, n)]
    labels += [f"L[{jalg.labels[a]}]" for a in range(n0, n)]
    labels += [f"d{m0 + k}" for k in range(m1)]
    grading = [0] * (dim_even + dim_odd)
    for a in range(n):
        grading[idx_plus(a)] = 1
        grading[idx_minus(a)] = -1

    par_j = jalg.parities
    dbasis = [(0, m) for m in inder.even_basis] + \
             [(1, m) for m in inder.odd_basis]

    dcoords = {}

    def der_coords(mat, par):
        key = (mat.tobytes(), par)
        if key not in dcoords:
            co = inder.subspace(par).coords_of(mat.flatten(order="F"))
            if co is None:
                raise ValueError("bracket escapes the inner derivations")
            dcoords[key] = co
        return dcoords[key]

    brackets = {}

    def put(i, j, terms):
        terms = [(k, c) for k, c in terms if f.reduce(c) != 0]
        if terms:
            brackets[(i, j)] = brackets.get((i, j), []) + terms

    for a in range(n):
        for b in range(n):
            sgn_ab = -1.0 if (par_j[a] and par_j[b]) else 1.0
            prod = jalg.products.get((a, b), [])
            # [a_+, b_-] = L_{ab} + D(a, b), and the flipped order
            dmap = inner_derivation(jalg, jalg.basis_vector(a),
                                    jalg.basis_vector(b))
            par = (par_j[a] + par_j[b]) % 2
            co = der_coords(amod(f, dmap.matrix), par)
            terms = [(idx_lmult(k), c) for k, c in prod]
            terms += [(idx_der(par, t), co[t])
                      for t in range(len(co)) if co[t] != 0]
            put(idx_plus(a), idx_minus(b), terms)
            put(idx_minus(b), idx_plus(a),
                [(k, -sgn_ab * c) for k, c in terms])
            # [L_a, b_+] = (ab)_+ and [L_a, b_-] = -(ab)_-
            plus_terms = [(idx_plus(k), c) for k, c in prod]
            minus_terms = [(idx_minus(k), -c) for k, c in prod]
            put(idx_lmult(a), idx_plus(b), plus_terms)
            put(idx_plus(b), idx_lmult(a),
                [(k, -sgn_ab * c) for k, c in plus_terms])
            put(idx_lmult(a), idx_minus(b), minus_terms)
            put(idx_minus(b), idx_lmult(a),
                [(k, -sgn_ab * c) for k, c in minus_terms])
            # [L_a, L_b] = D(a, b)
            put(idx_lmult(a), idx_lmult(b),
                [(idx_der(par, t), co[t])
                 for t in range(len(co)) if co[t] != 0])

    for t, (pd, dmap) in enumerate(dbasis):
        kk = t if pd == 0 else t - m0
        di = idx_der(pd, kk)
        for a in range(n):
            col = dmap.matrix[:, a]
            sgn = -1.0 if (pd and par_j[a]) else 1.0
            for mk, idx in ((idx_plus, idx_plus), (idx_minus, idx_minus)):
                terms = [(idx(r), col[r]) for r in range(n) if col[r] != 0]
                put(di, mk(a), terms)
                put(mk(a), di, [(k, -sgn * c) for k, c in terms])
            lterms = [(idx_lmult(r), col[r]) for r in range(n)
                      if col[r] != 0]
            put(di, idx_lmult(a), lterms)
            put(idx_lmult(a), di, [(k, -sgn * c) for k, c in lterms])

    for t1, (p1, d1) in enumerate(dbasis):
        for t2, (p2, d2) in enumerate(dbasis):
            br = super_commutator(d1, d2)
            co = der_coords(amod(f, br.matrix), br.parity)
            put(idx_der(p1, t1 if p1 == 0 else t1 - m0),
                idx_der(p2, t2 if p2 == 0 else t2 - m0),
                [(idx_der(br.parity, t), c)
                 for t, c in enumerate(co) if c != 0])

    return TkkAlgebra(f, dim_even, dim_odd, labels, brackets, grading,
                      jalg, inder)


@dataclass
class ExplicitIso:
    """A verified isomorphism of Lie superalgebras."""

    map: LinearMap
    verified: Verdict
    detail: dict | None = None


def find_sl2_triple(field) -> dict:
    """A split sl2 triple (h, e, f) inside the cyclic 3-matrix basis.

    Candidates are tried in a fixed order and the first one passing
    [h,e] = 2e, [h,f] = -2f, [e,f] = h is returned, as coefficient
    vectors over the basis.  Requires a square root of -1."""
    i = field.sqrt_minus_one()
    lie = so3(field)
    t = lie.tensor()

    def br(u, v):
        return amod(field, np.einsum("i,j,ijk->k", u, v, t))

    candidates = [(
        np.array([0, 0, 2 * i], dtype=np.complex128),
        np.array([-i, 1, 0], dtype=np.complex128),
        np.array([-i, -1, 0], dtype=np.complex128),
    )]
    for h, e, fv in candidates:
        ok = (iszero(amod(field, br(h, e) - 2 * e))
              and iszero(amod(field, br(h, fv) + 2 * fv))
              and iszero(amod(field, br(e, fv) - h)))
        if ok:
            return {"h": amod(field, h), "e": amod(field, e),
                    "f": amod(field, fv)}
    raise ValueError("no split sl2 triple found")


def sl2_identification(tits: TitsAlgebra, tkk: TkkAlgebra) -> ExplicitIso:
    """The isomorphism from the tensor construction over the inner
    derivations onto the 3-graded construction.

    Uses a split sl2 triple: e tensor x goes to the +1 copy, half h
    tensor x to the left multiplication, half f tensor x to the -1
    copy, and the derivation block is carried across unchanged."""
    f = tits.field
    jalg = tits.jalg
    if jalg is not tkk.jalg:
        raise ValueError("the two constructions are over different algebras")
    if not tits.dspace.equals(tkk.inder):
        raise ValueError("the tensor construction is not over the inner "
                         "derivations")
    triple = find_sl2_triple(f)
    base = np.stack([triple["h"], triple["e"], triple["f"]], axis=1)
    binv = inverse(f, base)  # rows: coordinates of E_i in (h, e, f)

    n = jalg.n
    total = tits.n
    m = np.zeros((total, total), dtype=np.complex128)
    for i in range(3):
        ch, ce, cf = binv[0, i], binv[1, i], binv[2, i]
        for a in range(n):
            src = tits.idx_tensor(i, a)
            m[tkk.idx_lmult(a), src] += 2 * ch
            m[tkk.idx_plus(a), src] += ce
            m[tkk.idx_minus(a), src] += 2 * cf
    m0, m1 = tits.dspace.dims
    for par, cnt in ((0, m0), (1, m1)):
        for k in range(cnt):
            m[tkk.idx_der(par, k), tits.idx_der(par, k)] = 1.0
    m = amod(f, m)
    lm = LinearMap(tits, tkk, 0, m)
    v = is_homomorphism(lm)
    if v and rank(f, m) != total:
        v = Verdict(False, {"reason": "not bijective"})
    detail = {"sl2": {k: [f.scalar_to_json(c) for c in vec]
                      for k, vec in triple.items()}}
    return ExplicitIso(lm, v, detail)


def lie_from_derivations(ds: DerivationSpace) -> LieSuperAlgebra:
    """A derivation space as an abstract Lie superalgebra over its
    canonical basis, brackets expressed in coordinates."""
    f = ds.algebra.field
    m0, m1 = ds.dims
    basis = [(0, m) for m in ds.even_basis] + [(1, m) for m in ds.odd_basis]
    brackets = {}
    for t1, (_, d1) in enumerate(basis):
        for t2, (_, d2) in enumerate(basis):
            br = super_commutator(d1, d2)
            co = ds.subspace(br.parity).coords_of(
                amod(f, br.matrix).flatten(order="F"))
            if co is None:
                raise ValueError("derivation space is not bracket closed")
            off = 0 if br.parity == 0 else m0
            terms = [(off + t, c) for t, c in enumerate(co) if c != 0]
            if terms:
                brackets[(t1, t2)] = terms
    labels = [f"D{k}" for k in range(m0 + m1)]
    lie = LieSuperAlgebra(f, m0, m1, labels, brackets)
    lie.space = ds
    return lie


def _der_lie_coords(lie: LieSuperAlgebra, dmap: LinearMap):
    """Coordinates of a derivation in the abstract copy of its space."""
    ds = lie.space
    co = ds.subspace(dmap.parity).coords_of(
        amod(lie.field, dmap.matrix).flatten(order="F"))
    if co is None:
        raise ValueError("map lies outside the derivation space")
    m0 = ds.dims[0]
    out = np.zeros(lie.n, dtype=np.complex128)
    off = 0 if dmap.parity == 0 else m0
    out[off:off + len(co)] = co
    return out


def der_as_tkk(ck: ChengKac, kd: KantorDouble, act: S4Action,
               coord: CoordinateAlgebra, phi: LinearMap,
               transfer: CoordinateTransfer,
               der_j: DerivationSpace, inder_j: DerivationSpace,
               bar_k: DerivationSpace, inder_k: DerivationSpace):
    """Realize the big derivation algebra as the tensor construction
    over the rank-2 double.

    The tensor part of the map sends the i-th matrix unit against z to
    the conjugate, under the cyclic symmetry, of the coordinate image
    of z; the derivation part inverts the bracket transfer.  Returns
    the verified isomorphism for the full derivation algebra over the
    stable double, and the one for the inner derivations over the
    inner double."""
    f = ck.alg.field

    def build(idspace, jspace):
        tits = tits_construction(kd.alg, idspace, inder=inder_k)
        lie = lie_from_derivations(jspace)
        comp00 = grade_derivations(jspace).component((0, 0))
        arows = {
            0: np.stack([transfer.apply(b).flatten()
                         for b in comp00.even_basis]),
            1: np.stack([transfer.apply(b).flatten()
                         for b in comp00.odd_basis]),
        }
        n_k = kd.alg.n
        total = tits.n
        m = np.zeros((lie.n, total), dtype=np.complex128)
        for j in range(n_k):
            base = coord.as_map(phi.matrix[:, j])
            iota = {
                2: base,
                0: conjugate_der(act.phi, base),
            }
            iota[1] = conjugate_der(act.phi, iota[0])
            for i in range(3):
                m[:, tits.idx_tensor(i, j)] = \
                    _der_lie_coords(lie, iota[i])
        dbasis = [(0, b) for b in idspace.even_basis] + \
                 [(1, b) for b in idspace.odd_basis]
        m0 = idspace.dims[0]
        for t, (par, b) in enumerate(dbasis):
            c = solve_right(f, arows[par].T, b.flatten())
            if c is None:
                raise ValueError("derivation of the double is outside the "
                                 "transferred image")
            parts = (comp00.even_basis if par == 0 else comp00.odd_basis)
            total_m = sum((ci * p.matrix for ci, p in zip(c, parts)),
                          np.zeros_like(parts[0].matrix))
            pre = LinearMap(ck.alg, ck.alg, par, amod(f, total_m),
                            check=False)
            m[:, tits.idx_der(par, t if par == 0 else t - m0)] = \
                _der_lie_coords(lie, pre)
        m = amod(f, m)
        lm = LinearMap(tits, lie, 0, m)
        v = is_homomorphism(lm)
        if v and (tits.n != lie.n or rank(f, m) != lie.n):
            v = Verdict(False, {"reason": "not bijective"})
        return ExplicitIso(lm, v)

    return build(bar_k, der_j), build(inder_k, inder_j)
