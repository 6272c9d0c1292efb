import numpy as np
import pytest

from stylewarp.corpus import build_vocab
from stylewarp.embedding import (
    TrainingConfig,
    analogy,
    context_windows,
    load_model,
    save_model,
    step_loss_and_grads,
    train,
)
from stylewarp.errors import ParseError, ValidationError
from stylewarp.signal import cosine_similarity

from conftest import two_topic_document


class TestTrainingConfig:
    def test_defaults_valid(self):
        cfg = TrainingConfig()
        assert cfg.dim == 100 and cfg.window == 10

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"dim": 0},
            {"window": 0},
            {"epochs": 0},
            {"negative": 0},
            {"initial_lr": 0.0},
            {"mode": "glove"},
            {"subsample": -0.1},
        ],
    )
    def test_invalid_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            TrainingConfig(**kwargs)


class TestContextWindows:
    def test_window_one(self):
        pairs = context_windows(["a", "b", "c"], c=1)
        assert pairs == [("a", ["b"]), ("b", ["a", "c"]), ("c", ["b"])]

    def test_single_token_no_context(self):
        assert context_windows(["a"], c=3) == []

    def test_fixed_window_two_center_middle(self):
        pairs = context_windows(["a", "b", "c", "d", "e"], c=2)
        center, context = pairs[2]
        assert center == "c"
        assert context == ["a", "b", "d", "e"]

    def test_dynamic_window_within_bounds(self):
        rng = np.random.default_rng(0)
        tokens = list("abcdefgh")
        for center, context in context_windows(tokens, c=3, rng=rng):
            assert 1 <= len(context) <= 6
            assert center not in ("",)

    def test_invalid_window_rejected(self):
        with pytest.raises(ValidationError):
            context_windows(["a"], c=0)


class TestGradients:
    def test_matches_central_finite_differences(self):
        rng = np.random.default_rng(17)
        h = 1e-4
        for _ in range(100):
            dim = int(rng.integers(2, 9))
            k = int(rng.integers(1, 6))
            l1 = rng.normal(scale=0.8, size=dim)
            outputs = rng.normal(scale=0.8, size=(k + 1, dim))
            labels = np.zeros(k + 1)
            labels[0] = 1.0

            _, grad_l1, grad_out = step_loss_and_grads(l1, outputs, labels)

            def loss_at(l1v, outv):
                return step_loss_and_grads(l1v, outv, labels)[0]

            for c in range(dim):
                bump = np.zeros(dim)
                bump[c] = h
                fd = (loss_at(l1 + bump, outputs) - loss_at(l1 - bump, outputs)) / (2 * h)
                denom = max(abs(fd), abs(grad_l1[c]), 1e-8)
                assert abs(fd - grad_l1[c]) / denom < 1e-4

            for r in range(k + 1):
                for c in range(dim):
                    bump = np.zeros((k + 1, dim))
                    bump[r, c] = h
                    fd = (loss_at(l1, outputs + bump) - loss_at(l1, outputs - bump)) / (2 * h)
                    denom = max(abs(fd), abs(grad_out[r, c]), 1e-8)
                    assert abs(fd - grad_out[r, c]) / denom < 1e-4


class TestTrain:
    def test_output_shape(self):
        doc = two_topic_document(seed=1, n_sentences=20)
        vocab = build_vocab([doc], min_count=1)
        model = train([doc], vocab, TrainingConfig(dim=12, window=2, epochs=2, seed=1))
        assert model.input_vectors.shape == (len(vocab), 12)
        assert model.output_vectors.shape == (len(vocab), 12)

    def test_all_entries_finite(self, topic_model):
        assert np.all(np.isfinite(topic_model.input_vectors))
        assert np.all(np.isfinite(topic_model.output_vectors))

    def test_bit_reproducible(self):
        doc = two_topic_document(seed=2, n_sentences=30)
        vocab = build_vocab([doc], min_count=1)
        cfg = TrainingConfig(dim=8, window=2, epochs=3, seed=99)
        m1 = train([doc], vocab, cfg)
        m2 = train([doc], vocab, cfg)
        assert np.array_equal(m1.input_vectors, m2.input_vectors)
        assert np.array_equal(m1.output_vectors, m2.output_vectors)

    def test_seed_changes_result(self):
        doc = two_topic_document(seed=2, n_sentences=30)
        vocab = build_vocab([doc], min_count=1)
        m1 = train([doc], vocab, TrainingConfig(dim=8, window=2, epochs=2, seed=1))
        m2 = train([doc], vocab, TrainingConfig(dim=8, window=2, epochs=2, seed=2))
        assert not np.array_equal(m1.input_vectors, m2.input_vectors)

    def test_loss_decreases_over_epochs(self, topic_model):
        assert topic_model.epoch_losses[-1] < topic_model.epoch_losses[0]

    def test_topic_blocks_separate(self, topic_model):
        within = np.mean(
            [
                cosine_similarity(topic_model.vector(p), topic_model.vector(q))
                for p, q in [("a", "b"), ("a", "c"), ("b", "c"), ("x", "y"), ("x", "z"), ("y", "z")]
            ]
        )
        cross = np.mean(
            [
                cosine_similarity(topic_model.vector(p), topic_model.vector(q))
                for p in "abc"
                for q in "xyz"
            ]
        )
        assert within > cross

    def test_skipgram_mode_works(self):
        doc = two_topic_document(seed=3, n_sentences=40)
        vocab = build_vocab([doc], min_count=1)
        model = train([doc], vocab, TrainingConfig(dim=8, window=2, epochs=10, seed=4, mode="skipgram"))
        assert np.all(np.isfinite(model.input_vectors))
        assert model.epoch_losses[-1] < model.epoch_losses[0]

    def test_empty_vocabulary_rejected(self):
        doc = two_topic_document(seed=1, n_sentences=5)
        vocab = build_vocab([doc], min_count=1)
        vocab.token_to_index = {}
        vocab.index_to_token = []
        with pytest.raises(ValidationError):
            train([doc], vocab, TrainingConfig(dim=4))

    def test_counts_required(self):
        doc = two_topic_document(seed=1, n_sentences=5)
        vocab = build_vocab([doc], min_count=1)
        vocab.counts = None
        with pytest.raises(ValidationError):
            train([doc], vocab, TrainingConfig(dim=4))

    def test_subsampling_runs(self):
        doc = two_topic_document(seed=5, n_sentences=30)
        vocab = build_vocab([doc], min_count=1)
        cfg = TrainingConfig(dim=8, window=2, epochs=2, seed=1, subsample=1e-2)
        model = train([doc], vocab, cfg)
        assert np.all(np.isfinite(model.input_vectors))

    def test_multiworker_runs(self):
        doc = two_topic_document(seed=6, n_sentences=30)
        vocab = build_vocab([doc], min_count=1)
        model = train([doc], vocab, TrainingConfig(dim=8, window=2, epochs=2, seed=1), workers=2)
        assert np.all(np.isfinite(model.input_vectors))


class TestAnalogy:
    def test_collapses_to_nearest_neighbor(self, topic_model):
        # query(t, t, c) reduces to the nearest neighbor of c excluding {t, c}
        result = analogy(topic_model, "a", "a", "x")
        vectors = topic_model.input_vectors
        vocab = topic_model.vocabulary
        sims = {
            tok: cosine_similarity(vectors[vocab.index(tok)], topic_model.vector("x"))
            for tok in vocab.index_to_token
            if tok not in ("a", "x")
        }
        assert result == max(sims, key=lambda t: (sims[t], -vocab.index(t)))

    def test_topic_block_analogy(self, topic_model):
        assert analogy(topic_model, "a", "b", "x") in {"y", "z"}

    def test_unknown_token_rejected(self, topic_model):
        with pytest.raises(ValidationError, match="nope"):
            analogy(topic_model, "a", "b", "nope")


class TestModelIO:
    def test_round_trip_within_tolerance(self, topic_model, tmp_path):
        path = tmp_path / "model.txt"
        save_model(topic_model, path)
        loaded = load_model(path)
        assert loaded.vocabulary.index_to_token == topic_model.vocabulary.index_to_token
        assert np.abs(loaded.input_vectors - topic_model.input_vectors).max() < 1e-6

    def test_header_count_mismatch(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\na 1 2 3\nb 1 2 3\nc 1 2 3\n")
        with pytest.raises(ParseError):
            load_model(path)

    def test_empty_vocabulary_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("0 100\n")
        with pytest.raises(ParseError, match="empty vocabulary"):
            load_model(path)

    def test_non_numeric_field_has_line_number(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 2\na 1.0 2.0\nb 1.0 oops\n")
        with pytest.raises(ParseError, match="3"):
            load_model(path)

    def test_wrong_field_count(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1 3\na 1.0 2.0\n")
        with pytest.raises(ParseError):
            load_model(path)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("banana\n")
        with pytest.raises(ParseError):
            load_model(path)
