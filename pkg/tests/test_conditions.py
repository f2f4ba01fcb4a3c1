"""Unit tests for the sufficient-condition checkers."""

import numpy as np
import pytest

from frameweave import (
    Frame,
    NotAFrame,
    NotWovenPremise,
    Scope,
    ZeroFamily,
    certify_woven,
    check_corollary,
    check_norm_sum,
    check_perturbation,
    operator_norm,
    optimal_bounds,
)

from _helpers import random_frame

F = Frame([[1.0, 0.0], [0.0, 1.0], [2.0, 0.0]])
G = Frame([[2.0, 0.0], [0.0, -1.0], [0.0, -2.0]])
H = Frame([[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0]])


def perturb_one_vector(rng, frame, eps):
    rows = frame.vectors.copy()
    idx = int(rng.integers(len(frame)))
    delta = rng.standard_normal(frame.ambient_dim)
    rows[idx] += delta * (eps / np.linalg.norm(delta))
    return Frame(rows)


class TestCheckPerturbation:
    def test_zero_perturbation(self):
        base = certify_woven(F, G)
        report = check_perturbation(F, G, G)
        assert report.condition_holds
        assert report.lhs == 0.0
        assert report.rhs == base.universal_lower
        span_upper = optimal_bounds(G, Scope.SPAN_OF_FAMILY).upper
        expected = base.universal_lower**2 / (base.universal_upper + span_upper)
        assert report.guaranteed_lower == pytest.approx(expected, rel=1e-12)
        assert report.guaranteed_upper == pytest.approx(
            base.universal_upper + span_upper, rel=1e-12
        )

    def test_tiny_perturbation_confirmed_by_oracle(self):
        rng = np.random.default_rng(40)
        frame_h = perturb_one_vector(rng, G, 1e-6)
        report = check_perturbation(F, G, frame_h)
        assert report.condition_holds
        oracle = certify_woven(F, frame_h)
        assert oracle.woven
        assert oracle.universal_lower >= report.guaranteed_lower - 1e-9

    def test_triple_fails_and_oracle_agrees(self):
        # independent norm computations pin the quantities the checker reports
        norm_g = np.linalg.svd(G.vectors.T, compute_uv=False)[0]
        norm_h = np.linalg.svd(H.vectors.T, compute_uv=False)[0]
        norm_diff = np.linalg.svd(G.vectors.T - H.vectors.T, compute_uv=False)[0]
        report = check_perturbation(F, G, H)
        assert report.lhs == pytest.approx((norm_g + norm_h) * norm_diff, rel=1e-12)
        assert not report.condition_holds
        assert report.guaranteed_lower is None
        assert not certify_woven(F, H).woven

    def test_premise_failure(self):
        with pytest.raises(NotWovenPremise):
            check_perturbation(F, H, G)


class TestCheckCorollary:
    def test_identical_families(self):
        report = check_corollary(F, F)
        assert report.condition_holds
        assert report.lhs == 0.0
        assert report.rhs == pytest.approx(optimal_bounds(F).lower, rel=1e-12)

    def test_tiny_perturbation_confirmed_by_oracle(self):
        rng = np.random.default_rng(41)
        frame = random_frame(rng, 2, 4)
        delta = rng.standard_normal(frame.vectors.shape)
        delta *= 1e-6 / operator_norm(delta.T)
        other = Frame(frame.vectors + delta)
        report = check_corollary(frame, other)
        assert report.condition_holds
        oracle = certify_woven(frame, other)
        assert oracle.woven
        assert oracle.universal_lower >= report.guaranteed_lower - 1e-9

    def test_negated_basis_fails(self):
        basis = Frame([[1.0, 0.0], [0.0, 1.0]])
        report = check_corollary(basis, Frame(-basis.vectors))
        assert report.lhs == pytest.approx(4.0, rel=1e-12)
        assert report.rhs == pytest.approx(1.0, rel=1e-12)
        assert not report.condition_holds

    def test_requires_a_frame(self):
        line = Frame([[1.0, 0.0], [2.0, 0.0]])
        with pytest.raises(NotAFrame):
            check_corollary(line, line)


class TestCheckNormSum:
    def test_quoted_small_frame(self):
        frame = Frame([[0.25, 0.0], [0.0, 0.25]])
        other = Frame([[0.1, 0.0], [0.0, 0.1]])
        report = check_norm_sum(frame, other)
        lam1 = np.sqrt(2 * 0.25**2)
        lam2 = np.sqrt(2 * 0.1**2)
        assert report.rhs == pytest.approx(0.25**2, rel=1e-12)
        assert report.lhs == pytest.approx(lam1 * 0.25 + lam2 * 0.1, rel=1e-12)
        assert not report.condition_holds
        assert report.note is None

    def test_zero_family_rejected(self):
        frame = Frame([[1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(ZeroFamily):
            check_norm_sum(frame, Frame([[0.0, 0.0], [0.0, 0.0]]))

    def test_note_flags_large_energy(self):
        frame = Frame([[2.0, 0.0], [0.0, 2.0]])
        other = Frame([[0.1, 0.0], [0.0, 0.1]])
        report = check_norm_sum(frame, other)
        assert report.note is not None
        assert "outside (0, 1)" in report.note
        assert report.lhs > 0.0 and report.rhs > 0.0

    def test_sound_on_random_instances(self):
        # trace(S) >= n * lower bound forces lhs >= rhs on every nonzero pair,
        # so the implication "holds -> woven" can never fire a violation
        rng = np.random.default_rng(42)
        for _ in range(25):
            n = int(rng.integers(2, 4))
            m = int(rng.integers(n, 6))
            frame = Frame(random_frame(rng, n, m).vectors * rng.uniform(0.01, 2.0))
            other = Frame(random_frame(rng, n, m).vectors * rng.uniform(0.01, 2.0))
            report = check_norm_sum(frame, other)
            assert report.lhs >= report.rhs
            if report.condition_holds:
                assert certify_woven(frame, other).woven
