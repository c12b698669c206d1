"""Tests for the identity-check layer."""

from __future__ import annotations

from fractions import Fraction

import pytest

from qsphere.algebra import presentation_S, presentation_Sigma
from qsphere.rep import RepConfig
from qsphere.scalar import DomainError
from qsphere.verify import (
    check_kernel_structure,
    check_lemma_aux,
    check_lemma_main,
    check_lowest_weight_basis,
    check_relations_in_rep,
    check_symbolic_relations,
    joint_kernel_dims,
    lemma_aux_identity,
    run_suite,
)

HALF = Fraction(1, 2)


def cfg(n=1, q0=HALF, lam=1, K=6, mode="numeric"):
    return RepConfig(n, q0, lam, K, mode)


class TestSymbolicRelations:
    @pytest.mark.parametrize("kind,n,sphere", [
        ("Sigma", 1, True), ("Sigma", 3, True),
        ("S", 2, True), ("S", 2, False),
    ])
    def test_all_relations_close(self, kind, n, sphere):
        p = presentation_S(n, sphere) if kind == "S" else presentation_Sigma(n, sphere)
        report = check_symbolic_relations(p)
        assert report.passed, report.witnesses[:2]
        assert report.max_residual == 0.0

    def test_report_json_shape(self):
        report = check_symbolic_relations(presentation_Sigma(1))
        data = report.to_json()
        assert set(data) == {"check", "params", "max_residual", "passed", "witnesses"}
        assert data["passed"] is True


class TestLemmaAux:
    def test_m1_reduces_to_commutation(self):
        p = presentation_Sigma(2)
        report = check_lemma_aux(p, m_max=1)
        assert report.passed

    def test_q4_variant_n1(self):
        p = presentation_Sigma(1)
        report = check_lemma_aux(p, m_max=3)
        assert report.passed

    def test_n3_all_powers(self):
        p = presentation_Sigma(3)
        report = check_lemma_aux(p, m_max=5)
        assert report.passed

    def test_identity_is_nonzero_before_normalizing(self):
        e = lemma_aux_identity(2, 1, 2)
        assert not e.is_zero()

    def test_requires_sphere_on(self):
        with pytest.raises(DomainError):
            check_lemma_aux(presentation_Sigma(1, sphere_reduction=False), 2)
        with pytest.raises(DomainError):
            check_lemma_aux(presentation_S(1), 2)


class TestKernels:
    def test_dims_n2_k3(self):
        dims = joint_kernel_dims(cfg(n=2, K=3))
        assert dims == [4, 1]

    def test_lowest_weight_space_always_one_dim(self):
        for n in (1, 2):
            for K in (3, 4):
                dims = joint_kernel_dims(cfg(n=n, K=K, q0=Fraction(1, 3)))
                assert dims[-1] == 1

    def test_n1_k5(self):
        assert joint_kernel_dims(cfg(n=1, K=5)) == [1]

    def test_structure_report(self):
        report = check_kernel_structure(cfg(n=3, K=3))
        assert report.passed


class TestLemmaMain:
    def test_n1(self):
        report = check_lemma_main(cfg(n=1, K=6), k=1)
        assert report.passed, report.witnesses

    def test_n2_k1_complex_lambda(self):
        report = check_lemma_main(cfg(n=2, q0=Fraction(3, 5), lam=1j, K=5), k=1)
        assert report.passed, report.witnesses

    def test_n2_k2_uses_q4(self):
        report = check_lemma_main(cfg(n=2, q0=Fraction(3, 5), lam=1j, K=5), k=2)
        assert report.passed, report.witnesses
        assert report.params["mu"] == pytest.approx(float(Fraction(3, 5) ** 4))

    def test_rejects_small_k(self):
        with pytest.raises(DomainError):
            check_lemma_main(cfg(K=1), k=1)
        with pytest.raises(DomainError):
            check_lemma_main(cfg(n=1, K=6), k=2)


class TestLowestWeightBasis:
    def test_n1_single_step(self):
        # y_1* |0> = sqrt(1-q^4) |1> and (q^4;q^4)_1 = 1-q^4
        report = check_lowest_weight_basis(cfg(n=1, K=2))
        assert report.passed

    def test_n2_gram_identity(self):
        report = check_lowest_weight_basis(cfg(n=2, K=4))
        assert report.passed, report.witnesses[:2]


class TestRelationsInRep:
    def test_numeric_grid_point(self):
        p = presentation_Sigma(2, sphere_reduction=False)
        report = check_relations_in_rep(cfg(n=2, q0=Fraction(3, 5), lam=1j, K=4), p)
        assert report.passed, report.witnesses[:2]

    def test_exact_mode_gives_literal_zero(self):
        p = presentation_Sigma(1, sphere_reduction=False)
        report = check_relations_in_rep(cfg(n=1, K=5, mode="exact"), p)
        assert report.passed
        assert report.max_residual == 0.0

    def test_requires_raw_presentation(self):
        with pytest.raises(DomainError):
            check_relations_in_rep(cfg(n=1), presentation_Sigma(1))

    def test_requires_matching_n(self):
        with pytest.raises(DomainError):
            check_relations_in_rep(cfg(n=2), presentation_Sigma(1, sphere_reduction=False))


class TestSuite:
    def test_all_suite_sigma(self):
        reports = run_suite("all", presentation_Sigma(1), cfg(n=1, K=4), m_max=2)
        assert len(reports) >= 5
        assert all(r.passed for r in reports), [str(r) for r in reports if not r.passed]

    def test_relations_only_for_s(self):
        reports = run_suite("relations", presentation_S(2), None)
        assert len(reports) == 1 and reports[0].passed

    def test_unknown_suite(self):
        with pytest.raises(DomainError):
            run_suite("bogus", presentation_Sigma(1), None)

    def test_named_suite_needs_rep_for_s(self):
        with pytest.raises(DomainError):
            run_suite("kernel", presentation_S(1), None)
