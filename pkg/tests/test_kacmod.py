"""Kac modules: induction, normal ordering, typicality, singular vectors."""

import itertools
from fractions import Fraction

from superkac.algebra import (GenLabel, SuperAlgebraSpec,
                              build_fundamental_rep, check_super_relations,
                              structure_constants, typicality_factors)
from superkac.evenrep import build_even_irrep
from superkac.exact import ParamPoly, PolyMatrix
from superkac.kacmod import (character, induce, kac_typicality,
                             normal_order_odd, singular_vectors)
from superkac.testmatrix import KAC_CONFIGS, bindings_for


def build_kac(flavor, m, n, a):
    rep = build_fundamental_rep(SuperAlgebraSpec(m, n, flavor))
    sc = structure_constants(rep)
    L = build_even_irrep(rep.datum, a, sc)
    return induce(L, rep.datum, sc)


QUARTET = build_kac("sl", 2, 1, (0,))
OCTET = build_kac("sl", 2, 1, (1,))
SL31_TRIV = build_kac("sl", 3, 1, (0, 0))
GL21_A1 = build_kac("gl", 2, 1, (1,))

ALL_MODULES = {(cfg["flavor"], cfg["m"], cfg["n"], cfg["a"]):
               build_kac(cfg["flavor"], cfg["m"], cfg["n"], cfg["a"])
               for cfg in KAC_CONFIGS}


class TestInduce:
    def test_quartet_dimension_and_spectrum(self):
        K = QUARTET
        assert K.dim == 4
        y = K.matrices[GenLabel("y")]
        diag = [y.entry(i, i) for i in range(4)]
        y0 = K.y_scalar
        assert diag == [y0, y0 - 1, y0 - 1, y0 - 2]
        off_diag = {pos for pos in y.entries if pos[0] != pos[1]}
        assert not off_diag

    def test_octet_dimension(self):
        assert OCTET.dim == 8 == 2 ** 2 * 2

    def test_sl31_trivial_layers(self):
        K = SL31_TRIV
        assert K.dim == 8
        sizes = {}
        for layer in K.layers:
            sizes[layer] = sizes.get(layer, 0) + 1
        assert sizes == {0: 1, 1: 3, 2: 3, 3: 1}

    def test_dimension_formula_all_configs(self):
        for key, K in ALL_MODULES.items():
            assert K.dim == 2 ** K.odd_count * K.L.dim

    def test_layer_sizes_binomial(self):
        from math import comb
        for key, K in ALL_MODULES.items():
            P, dL = K.odd_count, K.L.dim
            sizes = {}
            for layer in K.layers:
                sizes[layer] = sizes.get(layer, 0) + 1
            assert sizes == {l: comb(P, l) * dL for l in range(P + 1)}

    def test_super_relations_exact_in_b(self):
        for key, K in ALL_MODULES.items():
            report = check_super_relations(K.matrices, K.sc, str(key))
            assert report.ok, report.summary()


class TestDegreeProfile:
    def test_u_linear_everything_else_constant(self):
        # the hypercharge matrix itself is y0(b) - layer, so it is the one
        # non-u matrix allowed (and required) to be linear in b
        for key, K in ALL_MODULES.items():
            for lab, mat in K.matrices.items():
                if lab.kind == "u":
                    assert mat.degree("b") <= 1
                elif lab.kind == "y":
                    assert mat.degree("b") == 1
                else:
                    assert mat.degree("b") == 0
                if "c" in K.params and lab.kind != "z0":
                    assert mat.degree("c") == 0

    def test_y_minus_scalar_is_integer_diagonal(self):
        for key, K in ALL_MODULES.items():
            y = K.matrices[GenLabel("y")]
            shifted = y - PolyMatrix.identity(K.dim, K.params).scale(K.y_scalar)
            assert shifted.degree("b") == 0
            for (r, c), val in shifted.entries.items():
                assert r == c
                assert val.constant_value().denominator == 1


class TestNormalOrder:
    def test_u_kills_generating_layer(self):
        for i in (1, 2):
            assert normal_order_odd(i, ((), 0), QUARTET) == {}

    def test_contraction_on_simple_root_pair(self):
        # u_1 (v_1 x L) = {u_1, v_1} L = b L for trivial even labels
        out = normal_order_odd(1, ((1,), 0), QUARTET)
        b = ParamPoly.var(QUARTET.params, "b")
        assert out == {((), 0): b}

    def test_coefficients_linear_in_b(self):
        K = OCTET
        for i in range(1, K.odd_count + 1):
            for element in K.basis:
                for coefficient in normal_order_odd(i, element, K).values():
                    assert coefficient.degree("b") <= 1


class TestTypicality:
    def test_root_multisets_coincide(self):
        for a in ((0,), (1,), (2,)):
            ty = kac_typicality(ALL_MODULES[("sl", 2, 1, a)])
            assert ty.roots_match
            assert ty.proportional

    def test_atypical_verdict_types(self):
        ty = kac_typicality(QUARTET)
        assert ty.vanishing_types(Fraction(0)) == (1,)
        assert ty.vanishing_types(Fraction(-1)) == (2,)
        assert not ty.is_typical(Fraction(0))

    def test_generic_b_typical(self):
        ty = kac_typicality(OCTET)
        value = ty.s_poly.substitute({"b": Fraction(5, 7)})
        assert value.constant_value() != 0
        assert ty.is_typical(Fraction(5, 7))

    def test_factor_roots_from_independent_expansion(self):
        # oracle: the factors come straight from the root data, the matrix
        # route is the object under test
        for key, K in ALL_MODULES.items():
            ty = kac_typicality(K)
            oracle = typicality_factors(K.datum, K.labels, K.params)
            assert list(ty.factors) == oracle


class TestSingularVectors:
    def test_typical_only_highest_weight(self):
        for key, K in ALL_MODULES.items():
            sv = singular_vectors(K, bindings_for(K.spec.flavor))
            assert len(sv.vectors) == 1
            only = sv.vectors[0]
            assert only.layer == 0
            assert only.coefficients == ((K.hw_index, Fraction(1)),)

    def test_atypical_adds_exactly_one_extra_vector(self):
        for key, K in ALL_MODULES.items():
            ty = kac_typicality(K)
            binds = bindings_for(K.spec.flavor)
            for root, _ in ty.factor_roots:
                sv = singular_vectors(K, dict(binds, b=root))
                extra = [v for v in sv.vectors if v.layer > 0]
                assert len(extra) == 1

    def test_type1_vector_sits_at_lambda_minus_beta1(self):
        # the simple-root factor is b itself, so the type-1 point is b = 0
        # and v_1 applied to the highest weight is singular there
        for key, K in ALL_MODULES.items():
            binds = dict(bindings_for(K.spec.flavor), b=Fraction(0))
            beta1 = K.datum.odd_positive_roots[0]
            expected_weight = tuple(
                c.substitute(binds).constant_value() - br
                for c, br in zip(K.weights[K.hw_index], beta1))
            sv = singular_vectors(K, binds)
            extra = [v for v in sv.vectors if v.layer > 0]
            assert [v.weight for v in extra] == [expected_weight]
            assert extra[0].layer == 1

    def test_atypical_vector_weight_structure(self):
        # when the even labels keep the Verma-level state alive, the extra
        # vector appears at Lambda - beta_i (layer 1); when they kill it,
        # it slides down the wedge to Lambda - (beta_1 + ... + beta_i) at
        # layer i.  Both branches verified against the nullspace.
        for key, K in ALL_MODULES.items():
            ty = kac_typicality(K)
            binds = bindings_for(K.spec.flavor)
            for root, _ in ty.factor_roots:
                if root == 0:
                    continue
                (itype,) = ty.vanishing_types(root)
                bound = dict(binds, b=root)
                hw = tuple(c.substitute(bound).constant_value()
                           for c in K.weights[K.hw_index])
                sv = singular_vectors(K, bound)
                (extra,) = [v for v in sv.vectors if v.layer > 0]
                beta_i = K.datum.odd_positive_roots[itype - 1]
                shallow = tuple(h - x for h, x in zip(hw, beta_i))
                partial = [Fraction(0)] * len(hw)
                for j in range(itype):
                    partial = [p + x for p, x in
                               zip(partial, K.datum.odd_positive_roots[j])]
                deep = tuple(h - x for h, x in zip(hw, partial))
                assert extra.weight in (shallow, deep)
                assert extra.layer == (1 if extra.weight == shallow
                                       else itype)

    def test_even_highest_weight_state_omega(self):
        # at the atypicality point, the layer-1 even singular vector is
        # proportional to (a f v - (a+1) v f) applied to the highest weight
        for a in (1, 2):
            K = ALL_MODULES[("sl", 2, 1, (a,))]
            bval = Fraction(-(a + 1))
            sv = singular_vectors(K, {"b": bval}, "even-only")
            fmat = K.matrices[GenLabel("f", 1)].substitute({"b": bval})
            vmat = K.matrices[GenLabel("v", 1)].substitute({"b": bval})
            hw = {K.hw_index: ParamPoly.const(K.params, 1)}
            omega: dict = {}
            for pos, val in fmat.apply(vmat.apply(hw)).items():
                omega[pos] = omega.get(pos, Fraction(0)) + \
                    a * val.constant_value()
            for pos, val in vmat.apply(fmat.apply(hw)).items():
                omega[pos] = omega.get(pos, Fraction(0)) - \
                    (a + 1) * val.constant_value()
            omega = {pos: v for pos, v in omega.items() if v}
            matches = []
            for vec in sv.at_layer(1):
                coeffs = dict(vec.coefficients)
                if set(coeffs) == set(omega):
                    ratios = {omega[p] / coeffs[p] for p in coeffs}
                    if len(ratios) == 1:
                        matches.append(vec)
            assert matches, "omega not found among layer-1 even singular vectors"

    def test_trivial_labels_vector_slides_to_layer_i(self):
        # with all even labels zero the even quotient kills every layer-1
        # candidate except v_1; the type-i extra vector is the bottom of the
        # sub-wedge on the first i odd directions
        K = SL31_TRIV
        ty = kac_typicality(K)
        for root, _ in ty.factor_roots:
            (itype,) = ty.vanishing_types(root)
            sv = singular_vectors(K, {"b": root})
            (extra,) = [v for v in sv.vectors if v.layer > 0]
            assert extra.layer == itype
            subsets = {K.basis[pos][0] for pos, _ in extra.coefficients}
            assert subsets == {tuple(range(1, itype + 1))}


class TestSecondaryAtypicality:
    def test_shifted_weight_remains_atypical_same_type(self):
        # light-cone property: <beta|beta> = 0 makes the i-th factor at
        # Lambda - beta_i coincide with the one at Lambda
        from superkac.algebra import weight_from_labels
        for key, K in ALL_MODULES.items():
            ty = kac_typicality(K)
            coords = weight_from_labels(K.datum, K.labels, K.params)
            for root, _ in ty.factor_roots:
                for i in ty.vanishing_types(root):
                    beta = K.datum.odd_positive_roots[i - 1]
                    shifted = tuple(c - x for c, x in zip(coords, beta))
                    shifted_rho = tuple(
                        c + r for c, r in zip(shifted, K.datum.rho))
                    factor_i = K.datum.bilinear(
                        shifted_rho, K.datum.odd_positive_roots[i - 1])
                    assert factor_i.substitute({"b": root}).is_zero


class TestCharacter:
    def test_total_multiplicity(self):
        for key, K in ALL_MODULES.items():
            table = character(K)
            assert sum(table.values()) == 2 ** K.odd_count * K.L.dim

    def test_induced_product_identity(self):
        # ch K = (product over odd positive roots of (1 + e^-beta)) ch L
        for key, K in [(k, m) for k, m in ALL_MODULES.items()][:4]:
            expected: dict = {}
            for subset_size in range(K.odd_count + 1):
                for subset in itertools.combinations(
                        range(K.odd_count), subset_size):
                    shift = [Fraction(0)] * (K.spec.m + K.spec.n)
                    for s in subset:
                        beta = K.datum.odd_positive_roots[s]
                        shift = [x + y for x, y in zip(shift, beta)]
                    for coord in K.L.weights:
                        key2 = tuple(c - s for c, s in zip(coord, shift))
                        expected[key2] = expected.get(key2, 0) + 1
            assert character(K) == expected

    def test_hypercharge_graded_dimensions_binomial(self):
        from math import comb
        K = SL31_TRIV
        by_layer: dict = {}
        for pos, layer in enumerate(K.layers):
            by_layer[layer] = by_layer.get(layer, 0) + 1
        assert by_layer == {l: comb(3, l) for l in range(4)}
