"""Kac modules: induction of an even module along the odd lowering
generators, with the odd Dynkin label b kept symbolic.

The basis is (odd subset) x (even basis): an element v_{s1}...v_{sk} w with
s1 < ... < sk.  Lowering generators act by signed wedge insertion, even
generators by the adjoint action on the wedge slots plus their action on
the even factor, and odd raising generators by normal ordering: u is
commuted rightward, each step contracting {u, v_s} into an even element
acting on the remaining tail.  The single hypercharge term of each
contraction is what makes the u matrices linear in b.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from superkac.algebra import (GenLabel, InputError, InternalConsistencyError,
                              RootDatum, StructureConstants, extend_matrices,
                              typicality_factors)
from superkac.evenrep import EvenModule
from superkac.exact import (ParamPoly, PolyMatrix, extract_rational_roots,
                            rational_linear_solve)


def wedge_insert(j: int, subset: tuple):
    """Insert index j into a sorted subset; returns (new_subset, sign) or None."""
    if j in subset:
        return None
    before = sum(1 for s in subset if s < j)
    new = subset[:before] + (j,) + subset[before:]
    return new, (-1) ** before


def wedge_replace(subset: tuple, position: int, new_index: int):
    """Replace the generator at one slot and resort; None if it repeats."""
    rest = subset[:position] + subset[position + 1:]
    if new_index in rest:
        return None
    before = sum(1 for s in rest if s < new_index)
    new = rest[:before] + (new_index,) + rest[before:]
    return new, (-1) ** ((position - before) % 2)


@dataclass(frozen=True)
class InducedModule:
    """Shared container for modules built by wedge induction or blocks of
    such; matrices are indexed by generator labels."""

    params: tuple
    basis: tuple                  # (subset, even_index) pairs
    matrices: dict                # GenLabel -> PolyMatrix
    weights: tuple                # epsilon/delta coordinates per basis vector
    layers: tuple                 # |subset| per basis vector

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index_of(self, subset: tuple, even_index: int) -> int:
        return self.basis.index((tuple(subset), even_index))


@dataclass(frozen=True)
class KacModule(InducedModule):
    spec: object = None
    datum: RootDatum = None
    sc: StructureConstants = None
    L: EvenModule = None
    labels: tuple = ()
    hw_index: int = 0
    y_scalar: ParamPoly = None
    z0_scalar: ParamPoly = None

    @property
    def odd_count(self) -> int:
        return self.sc.spec.odd_count


def _subset_order(P: int):
    """Layer-major, then lexicographic on the sorted subset."""
    out = []
    for layer in range(P + 1):
        out.extend(itertools.combinations(range(1, P + 1), layer))
    return out


def induce_core(P: int, params: tuple, base_dim: int,
                surface_labels: Sequence[GenLabel],
                base_mats: Mapping[GenLabel, PolyMatrix],
                adj: Mapping, uv_exp: Mapping) -> tuple:
    """Wedge induction shared by Kac modules over g and over the Heisenberg
    superalgebra.

    base_mats must provide the action of every even label reachable through
    uv_exp on the base module; adj[(g, s)] lists (t, coeff) with
    [g, v_s] = sum coeff v_t; uv_exp[(i, j)] lists (even label, coeff) for
    the contraction {u_i, v_j}.  Returns (basis, matrices) where matrices
    covers surface_labels plus all u_i and v_i.
    """
    subsets = _subset_order(P)
    basis = [(subset, l) for subset in subsets for l in range(base_dim)]
    index = {elem: pos for pos, elem in enumerate(basis)}
    dim = len(basis)

    def even_action_on_subset(g: GenLabel, subset: tuple):
        """Action of even g on subset x base as {(subset', matrix-on-base)}."""
        out = {}
        for position, s in enumerate(subset):
            for t, coeff in adj.get((g, s), ()):
                replaced = wedge_replace(subset, position, t)
                if replaced is None:
                    continue
                new_subset, sign = replaced
                key = new_subset
                add = ParamPoly.const(params, coeff * sign)
                scaled = PolyMatrix.identity(base_dim, params).scale(add)
                out[key] = out.get(key, PolyMatrix.zeros(base_dim, base_dim, params)) + scaled
        factor = base_mats[g]
        out[subset] = out.get(subset, PolyMatrix.zeros(base_dim, base_dim, params)) + factor
        return out

    u_maps: dict = {}

    def u_action(j: int, subset: tuple):
        """u_j on subset x base, as {(subset', matrix-on-base)} (normal order)."""
        key = (j, subset)
        cached = u_maps.get(key)
        if cached is not None:
            return cached
        out: dict = {}
        if subset:
            head, tail = subset[0], subset[1:]
            for g, coeff in uv_exp.get((j, head), ()):
                for new_subset, mat in even_action_on_subset(g, tail).items():
                    scaled = mat.scale(coeff)
                    out[new_subset] = out.get(
                        new_subset, PolyMatrix.zeros(base_dim, base_dim, params)) + scaled
            for sub2, mat in u_action(j, tail).items():
                inserted = wedge_insert(head, sub2)
                if inserted is None:
                    continue
                new_subset, sign = inserted
                scaled = mat.scale(-sign)
                out[new_subset] = out.get(
                    new_subset, PolyMatrix.zeros(base_dim, base_dim, params)) + scaled
            out = {s: m for s, m in out.items() if not m.is_zero}
        u_maps[key] = out
        return out

    matrices: dict = {}
    for g in surface_labels:
        entries = {}
        for subset in subsets:
            for new_subset, mat in even_action_on_subset(g, subset).items():
                for (r, c), val in mat.entries.items():
                    entries[(index[(new_subset, r)], index[(subset, c)])] = val
        matrices[g] = PolyMatrix(dim, dim, params, entries)

    for i in range(1, P + 1):
        entries = {}
        for subset in subsets:
            inserted = wedge_insert(i, subset)
            if inserted is None:
                continue
            new_subset, sign = inserted
            one = ParamPoly.const(params, sign)
            for l in range(base_dim):
                entries[(index[(new_subset, l)], index[(subset, l)])] = one
        matrices[GenLabel("v", i)] = PolyMatrix(dim, dim, params, entries)

        entries = {}
        for subset in subsets:
            for new_subset, mat in u_action(i, subset).items():
                for (r, c), val in mat.entries.items():
                    entries[(index[(new_subset, r)], index[(subset, c)])] = val
        matrices[GenLabel("u", i)] = PolyMatrix(dim, dim, params, entries)

    return tuple(basis), matrices


def _scaled_identity(dim: int, params: tuple, scalar: ParamPoly) -> PolyMatrix:
    return PolyMatrix.identity(dim, params).scale(scalar)


def induce(L: EvenModule, datum: RootDatum, sc: StructureConstants) -> KacModule:
    """The Kac module K(L): free action of the odd lowering generators on L."""
    spec = sc.spec
    P = spec.odd_count
    params = L.params

    base_even = dict(L.matrices)
    base_even[GenLabel("y")] = _scaled_identity(L.dim, params, L.y_scalar)
    if spec.flavor == "gl":
        base_even[GenLabel("z0")] = _scaled_identity(L.dim, params, L.z0_scalar)
    base_even = extend_matrices(base_even, sc.recipes)

    even_labels = [lab for lab in sc.basis
                   if lab.kind in ("h", "e", "f", "y", "z0")]
    adj = {}
    for g in sc.basis:
        if sc.parity[g]:
            continue
        for s in range(1, P + 1):
            expansion = sc.bracket(g, GenLabel("v", s))
            pairs = []
            for target, coeff in expansion.items():
                if target.kind != "v":
                    raise InternalConsistencyError(
                        f"[{g}, v_{s}] left the lowering multiplet")
                pairs.append((target.index, coeff))
            if pairs:
                adj[(g, s)] = tuple(pairs)

    uv_exp = {}
    for (i, j), expansion in sc.d.items():
        uv_exp[(i, j)] = tuple(expansion.items())

    basis, matrices = induce_core(P, params, L.dim, even_labels,
                                  base_even, adj, uv_exp)

    weights, layers = [], []
    for subset, l in basis:
        coord = list(L.weights[l])
        for s in subset:
            beta = datum.odd_positive_roots[s - 1]
            coord = [c - r for c, r in zip(coord, beta)]
        weights.append(tuple(coord))
        layers.append(len(subset))

    return KacModule(
        params=params, basis=basis, matrices=matrices,
        weights=tuple(weights), layers=tuple(layers),
        spec=spec, datum=datum, sc=sc, L=L, labels=tuple(L.labels),
        hw_index=0, y_scalar=L.y_scalar, z0_scalar=L.z0_scalar)


def normal_order_odd(u_idx: int, element: tuple, K: KacModule) -> dict:
    """u_idx applied to one basis element (subset, even_index): the linear
    combination of basis elements it produces, with ParamPoly coefficients."""
    subset, l = element
    column = K.matrices[GenLabel("u", u_idx)].column(K.index_of(subset, l))
    return {K.basis[row]: val for row, val in sorted(column.items())}


# -- typicality -------------------------------------------------------------

@dataclass(frozen=True)
class TypicalityReport:
    s_poly: ParamPoly             # coefficient of Lambda in w+ w- Lambda
    factors: tuple                # the P linear polynomials <Lambda+rho|beta_i>
    constant: Fraction            # s_poly == constant * prod(factors)
    proportional: bool
    s_roots: tuple                # sorted ((root, multiplicity), ...)
    factor_roots: tuple
    roots_match: bool

    def vanishing_types(self, b_value) -> tuple:
        """1-based indices i with <Lambda+rho|beta_i> = 0 at this b."""
        out = []
        for pos, factor in enumerate(self.factors, start=1):
            if factor.substitute({"b": b_value}).constant_value() == 0:
                out.append(pos)
        return tuple(out)

    def is_typical(self, b_value) -> bool:
        return not self.vanishing_types(b_value)


def kac_typicality(K: KacModule) -> TypicalityReport:
    """Apply all lowering then all raising odd generators to the highest
    weight vector and compare the resulting scalar with the product of the
    odd-root factors, as polynomials in b."""
    P = K.odd_count
    params = K.params
    state = {K.hw_index: ParamPoly.const(params, 1)}
    for i in range(P, 0, -1):
        state = K.matrices[GenLabel("v", i)].apply(state)
    for i in range(P, 0, -1):
        state = K.matrices[GenLabel("u", i)].apply(state)
    for pos, val in state.items():
        if pos != K.hw_index and not val.is_zero:
            raise InternalConsistencyError(
                "w+ w- Lambda left the highest weight line")
    s_poly = state.get(K.hw_index, ParamPoly.zero(params))
    if s_poly.is_zero:
        raise InternalConsistencyError(
            "typicality scalar vanished identically in b")

    factors = typicality_factors(K.datum, K.labels, params)
    product = ParamPoly.const(params, 1)
    for factor in factors:
        product = product * factor

    lead = s_poly.coefficient("b", P)
    constant = lead.constant_value() if lead.is_constant else None
    proportional = constant is not None and s_poly == product * constant

    s_roots, cofactor = extract_rational_roots(s_poly, "b")
    factor_roots: dict = {}
    for factor in factors:
        root = -(factor.coefficient("b", 0).constant_value()
                 / factor.coefficient("b", 1).constant_value())
        factor_roots[root] = factor_roots.get(root, 0) + 1
    factor_roots = sorted(factor_roots.items())
    roots_match = (list(s_roots) == list(factor_roots)
                   and cofactor.degree("b") == 0)

    return TypicalityReport(
        s_poly=s_poly, factors=tuple(factors), constant=constant,
        proportional=proportional, s_roots=tuple(s_roots),
        factor_roots=tuple(factor_roots), roots_match=roots_match)


# -- singular vectors --------------------------------------------------------

@dataclass(frozen=True)
class SingularVector:
    weight: tuple                 # substituted rational weight coordinates
    layer: int
    coefficients: tuple           # ((basis index, Fraction), ...)


@dataclass(frozen=True)
class SingularVectorReport:
    raising_set: str
    bindings: dict
    vectors: tuple

    def at_layer(self, layer: int):
        return [v for v in self.vectors if v.layer == layer]


def singular_vectors(K: KacModule, bindings: Mapping[str, Fraction],
                     raising_set: str = "even-and-odd") -> SingularVectorReport:
    """Exact nullspace of the stacked raising action, organized by weight.

    bindings must make every matrix parameter-free (b, and c for gl).
    """
    if raising_set not in ("even-and-odd", "even-only"):
        raise InputError(f"unknown raising set {raising_set!r}")
    bindings = {name: Fraction(v) for name, v in bindings.items()}
    missing = [p for p in K.params if p not in bindings]
    if missing:
        raise InputError(f"parameters {missing} must be bound for the solve")

    raising = [lab for lab in K.matrices
               if lab.kind == "e" or (raising_set == "even-and-odd"
                                      and lab.kind == "u")]
    raising.sort()
    mats = {lab: K.matrices[lab].substitute(bindings) for lab in raising}

    groups: dict = {}
    for pos, coord in enumerate(K.weights):
        key = tuple(c.substitute(bindings).constant_value() for c in coord)
        groups.setdefault(key, []).append(pos)

    found = []
    dim = K.dim
    for key in sorted(groups):
        cols = groups[key]
        stacked_rows = []
        for lab in raising:
            block = [[mats[lab].entry(r, c) for c in cols] for r in range(dim)]
            stacked_rows.extend(block)
        stacked = PolyMatrix.from_rows(stacked_rows, params=K.params) \
            if stacked_rows else PolyMatrix.zeros(0, len(cols), K.params)
        result = rational_linear_solve(stacked)
        for vec in result.nullspace:
            coeffs = tuple((cols[i], value) for i, value in enumerate(vec)
                           if value != 0)
            layer = K.layers[coeffs[0][0]]
            found.append(SingularVector(weight=key, layer=layer,
                                        coefficients=coeffs))
            # exactness self-check: the embedded vector is annihilated
            embedded = {pos: ParamPoly.const(K.params, value)
                        for pos, value in coeffs}
            for lab in raising:
                image = mats[lab].apply(embedded)
                if any(not v.is_zero for v in image.values()):
                    raise InternalConsistencyError(
                        f"reported singular vector not annihilated by {lab}")
    return SingularVectorReport(raising_set=raising_set,
                                bindings=dict(bindings), vectors=tuple(found))


def character(K: KacModule) -> dict:
    """Exact weight multiplicity table (weights as ParamPoly tuples)."""
    table: dict = {}
    for coord in K.weights:
        table[coord] = table.get(coord, 0) + 1
    return table
