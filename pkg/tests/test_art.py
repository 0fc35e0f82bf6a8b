"""Adaptive-resampling core: weight algebra, simplex invariants, boost loop."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artlab.art import (
    ArtConfig,
    SamplingDistribution,
    art_fit,
    blend,
    difficulty_scores,
    initial_distribution,
    normalize_weights,
)
from artlab.data import Dataset, class_priors
from artlab.nn import TrainerConfig


def imbalanced_blobs(counts=(60, 25, 10), d=3, seed=0):
    rng = np.random.default_rng(seed)
    X = np.vstack(
        [rng.normal(3.0 * c, 1.0, size=(n, d)) for c, n in enumerate(counts)]
    )
    y = np.repeat(np.arange(len(counts)), counts)
    return Dataset(X, y, len(counts))


unit_floats = st.floats(min_value=0.0, max_value=1.0)


class TestWeightAlgebra:
    def test_difficulty_is_one_minus_f1(self):
        assert np.allclose(difficulty_scores([1.0, 0.25, 0.0]), [0.0, 0.75, 1.0])

    def test_difficulty_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            difficulty_scores([0.5, 1.2])
        with pytest.raises(ValueError):
            difficulty_scores([-0.1])

    def test_normalize_sums_to_one(self):
        w = normalize_weights([0.2, 0.3, 0.5])
        assert w.sum() == pytest.approx(1.0)
        assert np.allclose(w, [0.2, 0.3, 0.5])

    def test_all_perfect_gives_uniform(self):
        assert np.allclose(normalize_weights([0.0, 0.0, 0.0, 0.0]), 0.25)

    @given(st.lists(unit_floats, min_size=2, max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_weights_on_simplex(self, f1s):
        w = normalize_weights(difficulty_scores(f1s))
        assert (w >= 0).all()
        assert w.sum() == pytest.approx(1.0)

    @given(st.lists(unit_floats, min_size=2, max_size=8))
    @settings(max_examples=200, deadline=None)
    def test_hardest_class_gets_largest_weight(self, f1s):
        w = normalize_weights(difficulty_scores(f1s))
        # tie-tolerant: the lowest-F1 class must share the maximum weight
        assert w[int(np.argmin(f1s))] == pytest.approx(w.max(), rel=1e-12, abs=1e-15)


class TestBlend:
    def test_convex_combination(self):
        p = blend(np.array([0.7, 0.3]), np.array([0.2, 0.8]), 0.5)
        assert np.allclose(p.probs, [0.45, 0.55])

    def test_endpoints(self):
        priors = np.array([0.6, 0.4])
        w = np.array([0.1, 0.9])
        assert np.allclose(blend(priors, w, 1.0).probs, priors)
        assert np.allclose(blend(priors, w, 0.0).probs, w)

    def test_rejects_bad_constant(self):
        with pytest.raises(ValueError):
            blend(np.array([1.0]), np.array([1.0]), 1.5)

    @given(
        st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=2, max_size=6),
        unit_floats,
    )
    @settings(max_examples=200, deadline=None)
    def test_blend_stays_on_simplex(self, raw, c):
        pri = np.asarray(raw) / np.sum(raw)
        w = np.full(pri.size, 1.0 / pri.size)
        p = blend(pri, w, c)
        assert (p.probs >= 0).all() and p.probs.sum() == pytest.approx(1.0)

    def test_initial_distribution_blends_uniform(self):
        priors = np.array([0.8, 0.2])
        p = initial_distribution(priors, 0.5, 2)
        assert np.allclose(p.probs, [0.65, 0.35])


class TestSamplingDistribution:
    def test_validates_simplex(self):
        with pytest.raises(ValueError):
            SamplingDistribution(np.array([0.5, 0.6]))
        with pytest.raises(ValueError):
            SamplingDistribution(np.array([-0.1, 1.1]))


class TestArtConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            ArtConfig(blending_constant=-0.1)
        with pytest.raises(ValueError):
            ArtConfig(boost_frequency=0)


class TestArtFit:
    def run(self, c=0.5, bf=2, epochs=9, seed=0, counts=(60, 25, 10)):
        ds = imbalanced_blobs(counts=counts, seed=seed)
        cfg = ArtConfig(
            blending_constant=c,
            boost_frequency=bf,
            trainer=TrainerConfig(epochs=epochs, batch_size=16, lr_max=1e-3, patience=100),
        )
        return ds, art_fit(
            ds,
            ds,
            cfg,
            rng_init=np.random.default_rng(1),
            rng_shuffle=np.random.default_rng(2),
            rng_resample=np.random.default_rng(3),
            hidden_widths=(8,),
        )

    def test_boost_history_length(self):
        # initial record plus one per bf epochs observed
        for bf, epochs in ((2, 9), (3, 9), (1, 5)):
            _, res = self.run(bf=bf, epochs=epochs)
            assert len(res.boost_history) == epochs // bf + 1

    def test_initial_record_shape(self):
        ds, res = self.run()
        first = res.boost_history[0]
        assert first.epoch == 0
        assert np.isnan(first.f1_per_class).all()
        assert np.allclose(first.weights, 1.0 / ds.num_classes)
        assert int(first.target_counts.sum()) == len(ds)

    def test_every_boost_is_simplex_and_full_size(self):
        ds, res = self.run()
        for rec in res.boost_history:
            assert (rec.probs >= 0).all()
            assert rec.probs.sum() == pytest.approx(1.0)
            assert int(rec.target_counts.sum()) == len(ds)

    def test_hardest_class_boosted(self):
        _, res = self.run()
        for rec in res.boost_history[1:]:
            assert int(np.argmax(rec.weights)) == int(np.argmin(rec.f1_per_class))

    def test_c_equals_one_keeps_prior_distribution(self):
        ds, res = self.run(c=1.0)
        priors = class_priors(ds).probs
        for rec in res.boost_history:
            assert np.allclose(rec.probs, priors)

    def test_bit_identical_reruns(self):
        _, r1 = self.run()
        _, r2 = self.run()
        for w1, w2 in zip(r1.model.weights, r2.model.weights):
            assert (w1 == w2).all()
        assert r1.history == r2.history

    def test_boost_epochs_multiples_of_bf(self):
        _, res = self.run(bf=3, epochs=9)
        assert [rec.epoch for rec in res.boost_history] == [0, 3, 6, 9]
