"""Unit tests for weaving: subsets, certification, universal bounds."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from frameweave import (
    EmptyList,
    EnumerationLimitExceeded,
    Frame,
    IndexSubset,
    ShapeMismatch,
    SubsetPolicy,
    TooFewVectors,
    apply_frame_operator,
    apply_operator,
    bessel_sum_bound,
    certify_woven,
    certify_woven_sequences,
    frame_operator,
    optimal_bounds,
    orthonormal_basis,
    profile_operator,
    projection,
    surjectivity_check,
    synthesis_norm_bound,
    weaving_family,
    weaving_operator,
)

from _helpers import random_frame

F = Frame([[1.0, 0.0], [0.0, 1.0], [2.0, 0.0]])
G = Frame([[2.0, 0.0], [0.0, -1.0], [0.0, -2.0]])
H = Frame([[1.0, 0.0], [-1.0, 0.0], [0.0, 2.0]])
SEQ_F = Frame([[1, 0, 2], [1, 0, -1], [-1, 0, 2], [1, 0, 3]])
SEQ_G = Frame([[1, -1, 0], [1, 2, 0], [-1, 3, 0], [1, -2, 0]])
SEQ_G_BROKEN = Frame([[1, -1, 0], [1, 2, 0], [-1, 3, 0], [1, 0, 0]])


class TestIndexSubset:
    def test_members_and_bits(self):
        sigma = IndexSubset.from_indices(3, [3])
        assert sigma.mask == 0b100
        assert sigma.bits == "100"
        assert sigma.members == (3,)
        assert 3 in sigma and 1 not in sigma

    def test_from_bits_lsb_is_index_one(self):
        sigma = IndexSubset.from_bits("0011")
        assert sigma.m == 4
        assert sigma.members == (1, 2)

    def test_trivial_detection(self):
        assert IndexSubset.empty(3).is_trivial
        assert IndexSubset.full(3).is_trivial
        assert not IndexSubset(3, 0b010).is_trivial

    def test_mask_out_of_range(self):
        with pytest.raises(ValueError):
            IndexSubset(2, 4)
        with pytest.raises(ValueError):
            IndexSubset.from_indices(2, [3])

    @given(st.integers(1, 12), st.data())
    def test_complement_involution(self, m, data):
        mask = data.draw(st.integers(0, (1 << m) - 1))
        sigma = IndexSubset(m, mask)
        assert sigma.complement.complement == sigma
        assert set(sigma.members) | set(sigma.complement.members) == set(range(1, m + 1))
        assert set(sigma.members) & set(sigma.complement.members) == set()

    @given(st.integers(1, 12), st.data())
    def test_selector_matches_members(self, m, data):
        mask = data.draw(st.integers(0, (1 << m) - 1))
        sigma = IndexSubset(m, mask)
        selector = sigma.selector()
        assert [i + 1 for i in range(m) if selector[i]] == list(sigma.members)


class TestWeavingFamily:
    def test_third_index_selected(self):
        family = weaving_family(F, H, IndexSubset.from_indices(3, [3]))
        np.testing.assert_array_equal(family.vectors, [[1, 0], [-1, 0], [2, 0]])

    def test_full_subset_gives_first_family(self):
        family = weaving_family(F, G, IndexSubset.full(3))
        np.testing.assert_array_equal(family.vectors, F.vectors)

    def test_empty_subset_gives_second_family(self):
        family = weaving_family(F, G, IndexSubset.empty(3))
        np.testing.assert_array_equal(family.vectors, G.vectors)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            weaving_family(F, Frame([[1.0, 0.0]]), IndexSubset.empty(1))
        with pytest.raises(ShapeMismatch):
            weaving_family(F, G, IndexSubset.empty(4))


class TestWeavingOperator:
    def test_full_subset_is_frame_operator(self):
        np.testing.assert_allclose(
            weaving_operator(F, G, IndexSubset.full(3)), frame_operator(F), atol=1e-14
        )

    def test_duplicated_vector(self):
        first = Frame([[1.0, 0.0], [0.0, 1.0]])
        second = Frame([[0.0, 1.0], [1.0, 0.0]])
        op = weaving_operator(first, second, IndexSubset.from_indices(2, [1]))
        np.testing.assert_allclose(op, [[2.0, 0.0], [0.0, 0.0]], atol=1e-14)

    def test_equal_families(self):
        for mask in range(8):
            np.testing.assert_allclose(
                weaving_operator(F, F, IndexSubset(3, mask)), frame_operator(F), atol=1e-14
            )


class TestCertifyWoven:
    def test_woven_pair(self):
        report = certify_woven(F, G)
        assert report.woven
        assert report.breaking_subset is None
        assert report.subsets_examined == 8
        assert 0.0 < report.universal_lower <= report.universal_upper

    def test_not_woven_pair_with_witness(self):
        report = certify_woven(F, H)
        assert not report.woven
        assert report.breaking_subset is not None
        assert report.breaking_subset.mask == 0b100
        assert report.breaking_subset.members == (3,)

    def test_restricted_plane_pair_breaks_at_one_and_three(self):
        # Oblique-free setting: map with equal ranges but no idempotency, frame
        # in that plane, certification runs in plane coordinates.
        mat = np.array([[1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
        family = Frame([[1, 0, 0], [1, -1, 0], [2, 0, 0]])
        image = apply_operator(profile_operator(mat), family)
        plane = orthonormal_basis(mat.T)
        restricted = Frame(family.vectors @ plane.basis)
        restricted_image = Frame(image.vectors @ plane.basis)
        report = certify_woven(restricted, restricted_image)
        assert not report.woven
        assert report.breaking_subset.members == (1, 3)

    def test_invertible_image_pair_not_woven(self):
        source = Frame([[0.0, 1.0], [1.0, 1.0], [0.0, 2.0]])
        image = apply_operator(profile_operator([[1.0, -1.0], [-1.0, -1.0]]), source)
        np.testing.assert_allclose(image.vectors, [[-1, -1], [0, -2], [-2, -2]], atol=1e-14)
        report = certify_woven(source, image)
        assert not report.woven
        # lexicographically smallest witness is {2}; the quoted witness {1, 3}
        # is checked through the surjectivity route
        assert report.breaking_subset.members == (2,)
        assert not surjectivity_check(source, image, IndexSubset.from_indices(3, [1, 3]))

    def test_symmetry_of_verdict_and_bounds(self):
        rng = np.random.default_rng(30)
        pairs = [(F, G), (F, H), (SEQ_F, SEQ_G)]
        for _ in range(10):
            n = int(rng.integers(2, 4))
            m = int(rng.integers(n, 6))
            pairs.append((random_frame(rng, n, m), random_frame(rng, n, m)))
        for left, right in pairs:
            one = certify_woven(left, right)
            two = certify_woven(right, left)
            assert one.woven == two.woven
            assert one.universal_lower == two.universal_lower
            assert one.universal_upper == two.universal_upper

    def test_oracle_equivalence_on_random_pairs(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            n = int(rng.integers(2, 5))
            m = int(rng.integers(n, 7))
            first = random_frame(rng, n, m)
            if rng.random() < 0.3:
                # collapse the partner onto a single direction to force failures
                direction = rng.standard_normal((1, n))
                second = Frame(rng.standard_normal((m, 1)) @ direction)
            else:
                second = random_frame(rng, n, m)
            report = certify_woven(first, second)
            span_verdict = all(
                surjectivity_check(first, second, IndexSubset(m, mask))
                for mask in range(1 << m)
            )
            assert report.woven == span_verdict

    def test_per_subset_bessel_bound(self):
        rng = np.random.default_rng(32)
        for _ in range(15):
            n = int(rng.integers(2, 4))
            m = int(rng.integers(n, 6))
            first = random_frame(rng, n, m)
            second = random_frame(rng, n, m)
            total = optimal_bounds(first).upper + optimal_bounds(second).upper
            for mask in range(1 << m):
                top = np.linalg.eigvalsh(weaving_operator(first, second, IndexSubset(m, mask)))[-1]
                assert top <= total + 1e-9

    def test_invertible_image_lower_bound(self):
        rng = np.random.default_rng(33)
        for _ in range(20):
            n = int(rng.integers(2, 4))
            m = int(rng.integers(n, 6))
            first = random_frame(rng, n, m)
            second = random_frame(rng, n, m)
            base = certify_woven(first, second)
            profile = profile_operator(rng.standard_normal((n, n)))
            if not profile.is_invertible:
                continue
            after = certify_woven(
                apply_operator(profile, first), apply_operator(profile, second)
            )
            floor = base.universal_lower / profile.inverse_norm**2
            assert after.universal_lower >= floor - 1e-9

    def test_enumeration_limit(self):
        with pytest.raises(EnumerationLimitExceeded) as err:
            certify_woven(F, G, limit=2)
        assert "3" in str(err.value) and "2" in str(err.value)

    def test_jobs_do_not_change_the_report(self):
        for left, right in [(F, G), (F, H), (SEQ_F, SEQ_G_BROKEN)]:
            serial = certify_woven(left, right, jobs=1)
            threaded = certify_woven(left, right, jobs=8)
            assert serial == threaded


class TestCertifyWovenSequences:
    def test_plane_pair_is_woven(self):
        report = certify_woven_sequences(SEQ_F, SEQ_G)
        assert report.woven
        assert report.subsets_examined == 14
        assert report.subset_policy is SubsetPolicy.NONTRIVIAL_ONLY

    def test_broken_pair(self):
        report = certify_woven_sequences(SEQ_F, SEQ_G_BROKEN)
        assert not report.woven
        assert report.breaking_subset.members == (1, 2, 3)

    def test_identical_bases(self):
        basis = Frame(np.eye(3))
        assert certify_woven_sequences(basis, basis).woven

    def test_single_vector_families_rejected(self):
        with pytest.raises(TooFewVectors):
            certify_woven_sequences(Frame([[1.0]]), Frame([[2.0]]))


class TestBesselSums:
    def test_sum(self):
        assert bessel_sum_bound([3.0, 1.0]) == 4.0

    def test_single_value(self):
        assert bessel_sum_bound([2.5]) == 2.5

    def test_synthesis_norm(self):
        assert synthesis_norm_bound([3.0, 1.0]) == 2.0

    def test_empty_rejected(self):
        with pytest.raises(EmptyList):
            bessel_sum_bound([])

    def test_dominates_universal_upper(self):
        report = certify_woven(F, G)
        total = bessel_sum_bound([optimal_bounds(F).upper, optimal_bounds(G).upper])
        assert total >= report.universal_upper - 1e-12


class TestSurjectivity:
    def test_sum_family_pair_every_subset(self):
        family = Frame([[1, 1], [1, 2], [1, -1]])
        image = apply_frame_operator(family)
        for mask in range(8):
            assert surjectivity_check(family, image, IndexSubset(3, mask))

    def test_breaking_subset(self):
        assert not surjectivity_check(F, H, IndexSubset.from_indices(3, [3]))

    def test_identical_bases(self):
        basis = Frame(np.eye(2))
        for mask in range(4):
            assert surjectivity_check(basis, basis, IndexSubset(2, mask))


class TestIdempotentWeavingIdentity:
    def test_energy_split_is_exact_for_orthogonal_projections(self):
        rng = np.random.default_rng(34)
        plane = orthonormal_basis(np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
        proj = projection(plane)
        profile = profile_operator(proj)
        assert profile.is_idempotent
        assert profile.range_equals_range_of_adjoint
        coeffs = np.array([[1.0, 0.0], [1.0, 1.0], [2.0, -1.0]])
        family = Frame(coeffs @ plane.basis.T)
        image = apply_operator(profile, family)
        m = len(family)
        for _ in range(20):
            f = plane.basis @ rng.standard_normal(plane.dim)
            inner_f = family.vectors @ f
            inner_img = image.vectors @ f
            total = float(np.sum(inner_f**2))
            for mask in range(1 << m):
                keep = IndexSubset(m, mask).selector()
                split = float(np.sum(inner_f[keep] ** 2) + np.sum(inner_img[~keep] ** 2))
                assert split == pytest.approx(total, abs=1e-9)

    def test_projection_pair_is_woven_in_plane_coordinates(self):
        plane = orthonormal_basis(np.array([[1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]))
        profile = profile_operator(projection(plane))
        coeffs = np.array([[1.0, 0.0], [1.0, 1.0], [2.0, -1.0]])
        family = Frame(coeffs @ plane.basis.T)
        image = apply_operator(profile, family)
        restricted = Frame(family.vectors @ plane.basis)
        restricted_image = Frame(image.vectors @ plane.basis)
        assert certify_woven(restricted, restricted_image).woven


class TestNonTransitivity:
    def test_triple(self):
        assert certify_woven(F, G).woven
        assert certify_woven(G, H).woven
        assert not certify_woven(F, H).woven
