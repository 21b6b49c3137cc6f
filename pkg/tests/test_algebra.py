"""Root data, fundamental representation and structure constants."""

import itertools
from fractions import Fraction

import pytest

from superkac.algebra import (GenLabel, InputError, SuperAlgebraSpec,
                              build_fundamental_rep, build_root_datum,
                              check_super_relations, grading_report,
                              structure_constants, super_jacobi_report,
                              supertrace, typicality_factors,
                              weight_eval, weight_from_labels)
from superkac.exact import ParamPoly, PolyMatrix, rational_linear_solve


def make(flavor, m, n):
    rep = build_fundamental_rep(SuperAlgebraSpec(m, n, flavor))
    return rep, structure_constants(rep)


SL21, SC21 = make("sl", 2, 1)
GL21, SCG21 = make("gl", 2, 1)


class TestRootDatum:
    def test_sl21_odd_roots_and_rho(self):
        datum = SL21.datum
        eps1, eps2, delta1 = (1, 0, 0), (0, 1, 0), (0, 0, 1)
        roots = {tuple(int(x) for x in w) for w in datum.odd_positive_roots}
        assert roots == {(1, 0, -1), (0, 1, -1)}  # eps_i - delta_1
        assert tuple(int(x) for x in datum.rho) == (0, -1, 1)  # -eps2 + delta1

    def test_beta1_is_the_simple_odd_root(self):
        for flavor, m, n in (("sl", 2, 1), ("sl", 3, 1), ("sl", 2, 3)):
            datum = build_root_datum(SuperAlgebraSpec(m, n, flavor))
            beta1 = datum.odd_positive_roots[0]
            expected = [Fraction(0)] * (m + n)
            expected[m - 1], expected[m] = Fraction(1), Fraction(-1)
            assert list(beta1) == expected

    def test_odd_roots_on_the_light_cone(self):
        for flavor, m, n in (("sl", 2, 1), ("gl", 3, 1), ("sl", 2, 3)):
            datum = build_root_datum(SuperAlgebraSpec(m, n, flavor))
            for beta in datum.odd_positive_roots:
                assert datum.bilinear(beta, beta) == 0

    def test_sl32_counts(self):
        datum = build_root_datum(SuperAlgebraSpec(3, 2, "sl"))
        assert len(datum.odd_positive_roots) == 6
        assert datum.rank == 3

    def test_rho_reproduced_from_root_lists(self):
        for flavor, m, n in (("sl", 2, 1), ("gl", 2, 3)):
            datum = build_root_datum(SuperAlgebraSpec(m, n, flavor))
            half = Fraction(1, 2)
            rho0 = [sum(w[i] for w in datum.even_positive_roots) * half
                    for i in range(m + n)]
            rho1 = [sum(w[i] for w in datum.odd_positive_roots) * half
                    for i in range(m + n)]
            assert list(datum.rho) == [a - b for a, b in zip(rho0, rho1)]

    def test_sl_nn_rejected(self):
        with pytest.raises(InputError):
            SuperAlgebraSpec(2, 2, "sl")
        with pytest.raises(InputError):
            SuperAlgebraSpec(3, 3, "sl")

    def test_gl_nn_contraction_degenerates(self):
        # the odd Cartan element of gl(n|n) has no hypercharge component,
        # so the table extraction rejects it (the odd label is not free)
        rep = build_fundamental_rep(SuperAlgebraSpec(2, 2, "gl"))
        with pytest.raises(InputError):
            structure_constants(rep)


class TestBilinearForm:
    def test_eps_norm(self):
        datum = SL21.datum
        eps1 = (Fraction(1), Fraction(0), Fraction(0))
        assert datum.bilinear(eps1, eps1) == 1

    def test_delta_norm_negative(self):
        datum = SL21.datum
        delta1 = (Fraction(0), Fraction(0), Fraction(1))
        assert datum.bilinear(delta1, delta1) == -1

    def test_rho_pairs_to_zero_with_simple_odd_root(self):
        # expand rho = -eps2 + delta1 against beta1 = eps2 - delta1:
        # -<eps2|eps2> + <delta1|-delta1>*(-1) = -1 + 1 = 0
        datum = SL21.datum
        assert datum.bilinear(datum.rho, datum.odd_positive_roots[0]) == 0


class TestFundamentalRep:
    def test_hypercharge_oracle_sl21(self):
        # oracle: y = diag(w, w, z) with supertrace 0 and [y, E13] = E13,
        # i.e. 2w - z = 0 and w - z = 1: the unique solution is (-1, -1, -2).
        res = rational_linear_solve(PolyMatrix.from_rows(
            [[2, -1, 0], [1, -1, 1]]))
        # solve rows (2w - z = 0), (w - z = 1) via the rref of [A | rhs]
        rref = res.rref
        w = rref.entry(0, 2).constant_value()
        z = rref.entry(1, 2).constant_value()
        assert (w, z) == (Fraction(-1), Fraction(-2))
        y = SL21.matrices[GenLabel("y")]
        assert [y.entry(i, i).constant_value() for i in range(3)] == \
            [w, w, z]

    def test_grading_is_unit(self):
        for rep, sc in ((SL21, SC21), (GL21, SCG21)):
            y = rep.matrices[GenLabel("y")]
            for idx in range(1, rep.spec.odd_count + 1):
                u = rep.matrices[GenLabel("u", idx)]
                v = rep.matrices[GenLabel("v", idx)]
                assert y @ u - u @ y == u
                assert y @ v - v @ y == v.scale(-1)

    def test_supertraceless_for_sl(self):
        for label, mat in SL21.matrices.items():
            assert supertrace(SL21.spec, mat).is_zero

    def test_z0_is_central_identity(self):
        z0 = GL21.matrices[GenLabel("z0")]
        assert z0 == PolyMatrix.identity(3, ())
        for label, mat in GL21.matrices.items():
            assert (z0 @ mat - mat @ z0).is_zero

    def test_elementary_anticommutator(self):
        e13 = PolyMatrix(3, 3, (), {(0, 2): ParamPoly.const((), 1)})
        e31 = PolyMatrix(3, 3, (), {(2, 0): ParamPoly.const((), 1)})
        lhs = e13 @ e31 + e31 @ e13
        assert lhs == PolyMatrix(3, 3, (), {(0, 0): ParamPoly.const((), 1),
                                            (2, 2): ParamPoly.const((), 1)})


class TestStructureConstants:
    def test_k_from_decomposition_oracle(self):
        # decompose E11 + E33 = alpha h_1 + kappa y over the fixed y; with
        # y = diag(-1,-1,-2) the unique solution is alpha = 1/2, kappa = -1/2.
        h1 = [Fraction(1), Fraction(-1), Fraction(0)]
        y = [Fraction(-1), Fraction(-1), Fraction(-2)]
        target = [Fraction(1), Fraction(0), Fraction(1)]
        from superkac.exact import ExactSolver
        solver = ExactSolver([h1, y])
        alpha, kappa = solver.solve(target)
        assert (alpha, kappa) == (Fraction(1, 2), Fraction(-1, 2))
        assert SC21.k == kappa
        # the same coefficient appears in every {u_i, v_i} contraction
        assert SC21.d[(2, 2)][GenLabel("y")] == kappa

    def test_k_nonzero_all_test_algebras(self):
        for flavor in ("sl", "gl"):
            for m, n in ((2, 1), (3, 1), (2, 3)):
                _, sc = make(flavor, m, n)
                assert sc.k != 0

    def test_uu_and_vv_anticommutators_vanish(self):
        P = SC21.spec.odd_count
        for i, j in itertools.product(range(1, P + 1), repeat=2):
            assert SC21.bracket(GenLabel("u", i), GenLabel("u", j)) == {}
            assert SC21.bracket(GenLabel("v", i), GenLabel("v", j)) == {}

    def test_y_centralizes_even_subalgebra(self):
        for i in range(1, SC21.spec.rank + 1):
            assert SC21.bracket(GenLabel("y"), GenLabel("h", i)) == {}
            assert SC21.bracket(GenLabel("y"), GenLabel("e", i)) == {}
            assert SC21.bracket(GenLabel("y"), GenLabel("f", i)) == {}

    def test_cartan_relations(self):
        # [h_i, e_j] = C_ij e_j as stored in the table
        rep, sc = make("sl", 3, 1)
        C = rep.datum.cartan_matrix
        for i in range(1, sc.spec.rank + 1):
            for j in range(1, sc.spec.rank + 1):
                expansion = sc.bracket(GenLabel("h", i), GenLabel("e", j))
                expected = {GenLabel("e", j): Fraction(C[i - 1][j - 1])} \
                    if C[i - 1][j - 1] else {}
                assert expansion == expected

    def test_super_jacobi_and_grading(self):
        for rep, sc in ((SL21, SC21), (GL21, SCG21)):
            assert super_jacobi_report(sc).ok
            assert grading_report(sc).ok


class TestRelationChecker:
    def test_fundamental_passes(self):
        assert check_super_relations(SL21.matrices, SC21).ok

    def test_symbolic_parameters_pass(self):
        lifted = {lab: mat.with_params(("b",))
                  for lab, mat in SL21.matrices.items()}
        assert check_super_relations(lifted, SC21).ok

    def test_zeroed_generator_fails_with_locator(self):
        broken = dict(SL21.matrices)
        broken[GenLabel("u", 1)] = PolyMatrix.zeros(3, 3, ())
        report = check_super_relations(broken, SC21)
        assert not report.ok
        failure = report.failures[0]
        assert failure.location and "u_1" in failure.location


class TestWeightsFromLabels:
    def test_h_eigenvalues_recovered(self):
        rep, sc = make("sl", 3, 1)
        coords = weight_from_labels(rep.datum, (2, 1))
        for i in range(1, 3):
            h = rep.matrices[GenLabel("h", i)]
            diag = [h.entry(p, p).constant_value() for p in range(4)]
            value = weight_eval(coords, diag)
            assert value == ParamPoly.const(coords[0].params, (2, 1)[i - 1])

    def test_odd_label_recovered_via_h_beta(self):
        # h_beta = {u_1, v_1} must take the value b on the highest weight
        for rep, sc in ((SL21, SC21), (GL21, SCG21)):
            coords = weight_from_labels(rep.datum, (1,))
            hbeta_mat = None
            for label, coeff in sc.d[(1, 1)].items():
                term = rep.matrices[label].scale(coeff)
                hbeta_mat = term if hbeta_mat is None else hbeta_mat + term
            diag = [hbeta_mat.entry(p, p).constant_value() for p in range(3)]
            params = coords[0].params
            assert weight_eval(coords, diag) == ParamPoly.var(params, "b")

    def test_gl_central_charge_recovered(self):
        coords = weight_from_labels(GL21.datum, (1,))
        params = coords[0].params
        total = coords[0] + coords[1] + coords[2]
        assert total == ParamPoly.var(params, "c")

    def test_non_dominant_rejected(self):
        with pytest.raises(InputError):
            weight_from_labels(SL21.datum, (-1,))
        with pytest.raises(InputError):
            typicality_factors(SL21.datum, (-2,))


class TestTypicalityFactors:
    def test_linear_in_b(self):
        for a in ((0,), (1,), (2,)):
            for factor in typicality_factors(SL21.datum, a):
                assert factor.degree("b") <= 1

    def test_sl21_quartet_atypicality_values(self):
        # independent expansion: with Lambda = lam(eps1+eps2) + c1 delta1 and
        # b = lam + c1, the two factors are <Lambda+rho|eps_i - delta_1>,
        # i.e. b and b + 1; the atypicality values of b are 0 and -1.
        factors = typicality_factors(SL21.datum, (0,))
        params = factors[0].params
        bvar = ParamPoly.var(params, "b")
        assert sorted(map(str, factors)) == sorted(
            [str(bvar), str(bvar + 1)])

    def test_generic_rational_b_typical(self):
        factors = typicality_factors(SL21.datum, (1,))
        values = [f.substitute({"b": Fraction(5, 7)}).constant_value()
                  for f in factors]
        assert all(v != 0 for v in values)
