"""The Heisenberg-type superalgebra H = g_{-1} + h' + g_1 and its action on
twisted Kac modules.

H keeps only the odd generators and the centre h' of the even subalgebra;
the sole nonzero brackets are [a_-, a_+] = iota'([a_-, a_+]), the projection
of the contraction onto h'.  Scaling the twist superdiagonal by a formal
parameter t gives a family rho_t of representations, affine in t; the
assignment phi = (rho_0 on lowering, d/dt on h' and raising) is itself a
representation of H, and coincides with the Kac module of H induced from
L x J_n(nu) with trivial h' action on L.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from superkac.algebra import (GenLabel, InputError, InternalConsistencyError,
                              StructureConstants, extend_matrices, sbracket)
from superkac.exact import ParamPoly, PolyMatrix, block_matrix, rational_linear_solve
from superkac.kacmod import KacModule, induce_core
from superkac.matryoshka import TwistSpec, directional_derivative
from superkac.report import VerificationReport


@dataclass(frozen=True)
class HeisenbergSpec:
    """Bracket table of H: odd pair contractions land in h', all else zero."""

    base: StructureConstants
    labels: tuple                 # u_1..u_P, v_1..v_P, y (, z0)
    hprime: tuple
    parity: dict
    table: dict                   # (la, lb) -> {h' label: Fraction}
    k: Fraction


def build_heisenberg(sc: StructureConstants) -> HeisenbergSpec:
    hprime = [GenLabel("y")]
    if sc.spec.flavor == "gl":
        hprime.append(GenLabel("z0"))
    P = sc.spec.odd_count
    odd = [GenLabel("u", i) for i in range(1, P + 1)] + \
          [GenLabel("v", i) for i in range(1, P + 1)]
    labels = tuple(odd + hprime)
    parity = {lab: (1 if lab.kind in ("u", "v") else 0) for lab in labels}

    table = {}
    for i in range(1, P + 1):
        for j in range(1, P + 1):
            projected = {lab: coeff for lab, coeff in sc.d[(i, j)].items()
                         if lab in hprime and coeff != 0}
            if projected:
                # anticommutators are symmetric, so both orders carry it
                table[(GenLabel("u", i), GenLabel("v", j))] = projected
                table[(GenLabel("v", j), GenLabel("u", i))] = projected
    return HeisenbergSpec(base=sc, labels=labels, hprime=tuple(hprime),
                          parity=parity, table=table, k=sc.k)


def heisenberg_structure_report(H: HeisenbergSpec) -> VerificationReport:
    """Two-step nilpotency and the graded Jacobi identity of the H bracket."""
    report = VerificationReport(f"Heisenberg bracket table over {H.base.spec}")
    for (la, lb), expansion in H.table.items():
        for target in expansion:
            for lc in H.labels:
                if H.table.get((target, lc)) or H.table.get((lc, target)):
                    report.add_fail("two-step nilpotency",
                                    f"[[{la},{lb}],{lc}]")
                    return report
    report.add_pass("all double brackets vanish (two-step nilpotent)")
    for i in range(1, H.base.spec.odd_count + 1):
        for j in range(1, H.base.spec.odd_count + 1):
            if i != j and H.table.get((GenLabel("u", i), GenLabel("u", j))):
                report.add_fail("odd raising part commutes", f"(u_{i},u_{j})")
                return report
    report.add_pass("[g1, g1] = [g-1, g-1] = 0 and [h', a] = 0 by table shape")
    return report


@dataclass(frozen=True)
class RhoFamily:
    """The twisted module with its superdiagonal scaled by a formal t."""

    base: KacModule
    spec: TwistSpec
    t_name: str
    params: tuple
    matrices: dict
    weights: tuple

    @property
    def dim(self) -> int:
        return self.spec.n * self.base.dim


def rho_family(K: KacModule, spec: TwistSpec, t_name: str = "t") -> RhoFamily:
    if spec.nu_c != 0 and K.spec.flavor != "gl":
        raise InputError("a z0 twist direction needs flavor gl")
    if t_name in K.params:
        raise InputError(f"parameter {t_name!r} already in use")
    params = K.params + (t_name,)
    t = ParamPoly.var(params, t_name)
    n, D = spec.n, K.dim
    sizes = [D] * n
    matrices = {}
    for label, mat in K.matrices.items():
        deriv = directional_derivative(K, K.sc, label, spec.nu_y, spec.nu_c)
        lifted = mat.with_params(params)
        deriv_t = deriv.with_params(params).scale(t)
        grid = [[None] * n for _ in range(n)]
        for level in range(n):
            grid[level][level] = lifted
            if level + 1 < n and not deriv_t.is_zero:
                grid[level][level + 1] = deriv_t
        matrices[label] = block_matrix(grid, sizes, sizes, params)
    weights = tuple(tuple(c.with_params(params) for c in coord)
                    for coord in K.weights) * n
    return RhoFamily(base=K, spec=spec, t_name=t_name, params=params,
                     matrices=matrices, weights=weights)


def affine_in_t_report(rho: RhoFamily) -> VerificationReport:
    report = VerificationReport("rho_t affine in t")
    for label, mat in sorted(rho.matrices.items(), key=lambda kv: str(kv[0])):
        deg = mat.degree(rho.t_name)
        if deg > 1:
            report.add_fail("degree in t at most 1", f"{label}", str(deg))
            return report
    report.add_pass("every generator matrix has degree <= 1 in t")
    report_t0 = all(
        rho.matrices[label].coefficient(rho.t_name, 1).is_zero
        for label in rho.matrices if label.kind in ("h", "e", "f", "v"))
    if report_t0:
        report.add_pass("t appears only through h' and the odd raising part")
    else:
        report.add_fail("t-dependence location",
                        "a (h,e,f,v) matrix gained a t term")
    return report


@dataclass(frozen=True)
class HModule:
    """Matrices of the H generators on L x J_n(nu) x Lambda(g_-1)."""

    rho: RhoFamily
    H: HeisenbergSpec
    params: tuple
    matrices: dict

    @property
    def dim(self) -> int:
        return self.rho.dim


def phi_map(rho: RhoFamily, H: HeisenbergSpec) -> HModule:
    """phi(a_-) = rho_0(a_-), phi(a_+) = rho'_t(a_+), phi(h) = rho'_t(h)."""
    t = rho.t_name
    base_params = rho.base.params
    matrices = {}
    for label in H.labels:
        mat = rho.matrices[label]
        if mat.degree(t) > 1:
            raise InternalConsistencyError(f"rho_t({label}) is not affine in t")
        if label.kind == "v":
            chosen = mat.coefficient(t, 0)
        else:
            chosen = mat.coefficient(t, 1)
        matrices[label] = chosen.with_params(base_params)
    return HModule(rho=rho, H=H, params=base_params, matrices=matrices)


def check_phi_representation(phi: HModule, H: HeisenbergSpec) -> VerificationReport:
    """Every superbracket of phi matrices equals its H bracket expansion."""
    report = VerificationReport("phi is an H-representation")
    dim = phi.dim
    zero = PolyMatrix.zeros(dim, dim, phi.params)
    bad = 0
    first = None
    for la, lb in itertools.product(H.labels, repeat=2):
        expected = zero
        for target, coeff in H.table.get((la, lb), {}).items():
            expected = expected + phi.matrices[target].scale(coeff)
        residual = sbracket(H.parity[la], H.parity[lb],
                            phi.matrices[la], phi.matrices[lb]) - expected
        if not residual.is_zero:
            bad += 1
            if first is None:
                pos, val = residual.first_nonzero()
                first = (f"pair ({la},{lb}) entry {pos}", str(val))
    if bad:
        report.add_fail(f"H bracket table under phi ({bad} violating pairs)",
                        first[0], first[1])
    else:
        report.add_pass(
            f"H bracket table under phi on all {len(H.labels)}^2 pairs")
    return report


def mixed_derivative_report(rho: RhoFamily) -> VerificationReport:
    """[rho_t(a), rho'_t(b)] + [rho'_t(a), rho_t(b)] = rho'_t([a, b]) exactly,
    over every ordered pair of the full basis."""
    sc = rho.base.sc
    report = VerificationReport("t-derivative of the representation property")
    t = rho.t_name
    full = extend_matrices(rho.matrices, sc.recipes)
    primes = {lab: mat.coefficient(t, 1) for lab, mat in full.items()}
    bad = 0
    first = None
    for la, lb in itertools.product(sc.basis, repeat=2):
        pa, pb = sc.parity[la], sc.parity[lb]
        lhs = sbracket(pa, pb, full[la], primes[lb]) + \
            sbracket(pa, pb, primes[la], full[lb])
        rhs = PolyMatrix.zeros(rho.dim, rho.dim, rho.params)
        for target, coeff in sc.bracket(la, lb).items():
            rhs = rhs + primes[target].scale(coeff)
        if lhs != rhs:
            bad += 1
            if first is None:
                pos, val = (lhs - rhs).first_nonzero()
                first = (f"pair ({la},{lb}) entry {pos}", str(val))
    if bad:
        report.add_fail(f"mixed t-derivative identity ({bad} violations)",
                        first[0], first[1])
    else:
        report.add_pass("mixed t-derivative identity on the full basis")
    return report


def _j_shift(n: int, base_dim: int, params: tuple, scale: Fraction) -> PolyMatrix:
    """scale * (shift across J layers) tensor identity on the base."""
    entries = {}
    one = ParamPoly.const(params, scale)
    if scale:
        for j in range(1, n):
            for l in range(base_dim):
                entries[((j - 1) * base_dim + l, j * base_dim + l)] = one
    return PolyMatrix(n * base_dim, n * base_dim, params, entries)


def induce_heisenberg(H: HeisenbergSpec, base_dim: int, spec: TwistSpec,
                      params: tuple) -> tuple:
    """K_H(L'; n; nu): direct wedge induction over H with the same
    conventions as the g-side Kac module.  Returns (basis, matrices)."""
    n = spec.n
    jdim = n * base_dim
    base_mats = {GenLabel("y"): _j_shift(n, base_dim, params, spec.nu_y)}
    if GenLabel("z0") in H.hprime:
        base_mats[GenLabel("z0")] = _j_shift(n, base_dim, params, spec.nu_c)
    uv_exp = {}
    P = H.base.spec.odd_count
    for i in range(1, P + 1):
        for j in range(1, P + 1):
            expansion = H.table.get((GenLabel("u", i), GenLabel("v", j)))
            if expansion:
                uv_exp[(i, j)] = tuple(expansion.items())
    basis, matrices = induce_core(P, params, jdim, list(H.hprime),
                                  base_mats, {}, uv_exp)
    return basis, matrices


def compare_with_KH(phi: HModule) -> VerificationReport:
    """Structural isomorphism of phi with the directly induced K_H.

    The identification maps the phi-side vector (J layer j, odd subset S,
    base vector l) to the K_H vector (S, J layer j, base vector l); under
    that permutation every generator matrix must agree exactly.  Also checks
    free generation over the odd lowering operators, the vanishing of
    phi(a_+) on the generating subspace, and the h' shift across J layers.
    """
    report = VerificationReport("phi vs directly induced K_H")
    rho = phi.rho
    K, H = rho.base, phi.H
    spec = rho.spec
    n, D, dL = spec.n, K.dim, K.L.dim
    P = K.odd_count
    params = phi.params

    if phi.dim != (2 ** P) * n * dL:
        report.add_fail("dimension 2^P * n * dim L", str(phi.dim))
        return report
    report.add_pass(f"dimension {phi.dim} = 2^{P} * {n} * {dL}")

    basis_kh, mats_kh = induce_heisenberg(H, dL, spec, params)
    subsets = [subset for subset, l in basis_kh if l == 0]

    # permutation: K_H index -> phi index
    perm = []
    for subset, jl in basis_kh:
        j, l = divmod(jl, dL)
        s_pos = subsets.index(subset)
        perm.append(j * D + s_pos * dL + l)

    agree = True
    for label in sorted(phi.matrices, key=str):
        mk = mats_kh[label]
        permuted = {(perm[r], perm[c]): val
                    for (r, c), val in mk.entries.items()}
        if PolyMatrix(phi.dim, phi.dim, params, permuted) != phi.matrices[label]:
            report.add_fail("generator matrices agree", f"{label}")
            agree = False
    if agree:
        report.add_pass("all generator matrices agree under the canonical "
                        "basis identification")

    # generating subspace on the phi side: subset = empty, any (j, l)
    generating = [j * D + l for j in range(n) for l in range(dL)]
    columns = []
    state_vectors = []
    for g in generating:
        for subset in subsets:
            state = {g: ParamPoly.const(params, 1)}
            for s in reversed(subset):
                state = phi.matrices[GenLabel("v", s)].apply(state)
            vec = [Fraction(0)] * phi.dim
            for pos, val in state.items():
                vec[pos] = val.constant_value() if val.is_constant else None
            state_vectors.append(vec)
    stack = PolyMatrix.from_rows(state_vectors, params=())
    rank = rational_linear_solve(stack).rank
    if rank == phi.dim:
        report.add_pass("free generation from L x J_n under the odd "
                        "lowering action (full wedge rank)")
    else:
        report.add_fail("free generation rank", f"{rank} < {phi.dim}")

    kills = all(
        all(phi.matrices[GenLabel("u", i)].entry(r, g).is_zero
            for r in range(phi.dim) for g in generating)
        for i in range(1, P + 1))
    if kills:
        report.add_pass("phi(a_+) annihilates the generating subspace")
    else:
        report.add_fail("phi(a_+) on generating subspace", "nonzero column")

    shift_ok = True
    for label in H.hprime:
        scale = spec.nu_y if label.kind == "y" else spec.nu_c
        expected = _j_shift(n, D, params, scale)
        if phi.matrices[label] != expected:
            shift_ok = False
            report.add_fail("h' acts by the nu shift across J layers",
                            f"{label}")
    if shift_ok:
        report.add_pass("h' acts by nu(h) times the J-layer shift")

    consts = [lab for lab in rho.matrices if lab.kind in ("h", "e", "f")]
    flat = all(rho.matrices[lab].coefficient(rho.t_name, 1).is_zero
               for lab in consts)
    if flat:
        report.add_pass("the semisimple even part has vanishing t-derivative")
    else:
        report.add_fail("semisimple even part t-derivative", "nonzero")
    return report
