import numpy as np
import pytest

from stylewarp.corpus import (
    Document,
    build_vocab,
    load_corpus_dir,
    make_document,
    split_sentences,
    strip_boilerplate,
    tokenize,
)
from stylewarp.errors import ValidationError


class TestStripBoilerplate:
    def test_both_markers(self):
        text = "junk header\n*** START OF THE EBOOK ***\nbody line\n*** END OF THE EBOOK ***\nlicense\n"
        assert strip_boilerplate(text) == "body line\n"

    def test_no_markers_identity(self):
        text = "just a plain text\nwith two lines\n"
        assert strip_boilerplate(text) == text

    def test_header_marker_only(self):
        text = "junk\n*** START OF THE EBOOK ***\nbody one\nbody two\n"
        assert strip_boilerplate(text) == "body one\nbody two\n"

    def test_footer_marker_only(self):
        text = "body one\nbody two\n*** END OF THE EBOOK ***\nlicense\n"
        assert strip_boilerplate(text) == "body one\nbody two\n"

    def test_first_marker_pair_wins(self):
        text = "*** START OF X ***\na\n*** END OF X ***\nb\n*** END OF X ***\n"
        assert strip_boilerplate(text) == "a\n"


class TestSplitSentences:
    def test_basic_split(self):
        assert split_sentences("It rained. He left.") == ["It rained.", "He left."]

    def test_abbreviation_suppressed(self):
        assert split_sentences("Mr. Holmes smiled.") == ["Mr. Holmes smiled."]

    def test_empty_input(self):
        assert split_sentences("") == []

    def test_exclamation_and_question(self):
        assert split_sentences("Stop! Who goes there? Nobody.") == [
            "Stop!",
            "Who goes there?",
            "Nobody.",
        ]

    def test_terminator_not_followed_by_whitespace(self):
        # a version number style dot inside a token does not split
        assert split_sentences("He said so.And left.") == ["He said so.And left."]

    def test_unterminated_tail_kept(self):
        assert split_sentences("First. second without end") == [
            "First.",
            "second without end",
        ]

    def test_never_returns_empty_strings(self):
        assert split_sentences("  . ! ?  ") == [".", "!", "?"]
        for s in split_sentences("One. Two! Three? "):
            assert s.strip()


class TestTokenize:
    def test_punctuation_and_case(self):
        assert tokenize("The sign, of Four!") == ["the", "sign", "of", "four"]

    def test_apostrophe_retained(self):
        assert tokenize("don't stop") == ["don't", "stop"]

    def test_digits_dropped(self):
        assert tokenize("1887") == []

    def test_curly_apostrophe_normalized(self):
        assert tokenize("don’t") == ["don't"]

    def test_idempotent_on_joined_output(self):
        rng = np.random.default_rng(5)
        words = ["alpha", "don't", "o'clock", "beta", "z"]
        for _ in range(50):
            sample = [words[i] for i in rng.integers(0, len(words), size=8)]
            once = tokenize(" ".join(sample))
            assert tokenize(" ".join(once)) == once


class TestDocument:
    def test_counts_match_sentences(self):
        doc = make_document("d", "One two three. Four five.")
        assert doc.sentence_count == len(doc.sentences) == 2
        assert doc.word_count == sum(len(s) for s in doc.sentences) == 5

    def test_empty_sentences_dropped(self):
        doc = make_document("d", "Hello there. 1887. Goodbye now.")
        assert doc.sentence_count == 2

    def test_direct_empty_sentence_rejected(self):
        with pytest.raises(ValidationError):
            Document(id="bad", sentences=((),))


class TestBuildVocab:
    @staticmethod
    def _doc(tokens: list[str]) -> Document:
        return Document(id="doc", sentences=(tuple(tokens),))

    def test_threshold_and_order(self):
        doc = self._doc(["a"] * 5 + ["b"] * 2 + ["c"])
        vocab = build_vocab([doc], min_count=2)
        assert vocab.token_to_index == {"a": 0, "b": 1}

    def test_min_count_one_keeps_all(self):
        doc = self._doc(["a", "b", "c"])
        vocab = build_vocab([doc], min_count=1)
        assert set(vocab.index_to_token) == {"a", "b", "c"}

    def test_ties_lexicographic(self):
        doc = self._doc(["beta", "alpha", "beta", "alpha"])
        vocab = build_vocab([doc], min_count=1)
        assert vocab.index_to_token == ["alpha", "beta"]

    def test_empty_corpus_raises(self):
        with pytest.raises(ValidationError):
            build_vocab([], min_count=1)

    def test_all_below_threshold_raises(self):
        doc = self._doc(["a", "b"])
        with pytest.raises(ValidationError):
            build_vocab([doc], min_count=3)

    def test_merge_order_does_not_matter(self):
        d1 = self._doc(["a", "a", "b"])
        d2 = self._doc(["b", "c", "c", "c"])
        v12 = build_vocab([d1, d2], min_count=1)
        v21 = build_vocab([d2, d1], min_count=1)
        assert v12.token_to_index == v21.token_to_index
        assert v12.counts == v21.counts

    def test_order_is_total(self):
        rng = np.random.default_rng(11)
        words = [f"w{i}" for i in range(20)]
        tokens = [words[i] for i in rng.integers(0, len(words), size=300)]
        vocab = build_vocab([self._doc(tokens)], min_count=1)
        assert vocab.counts is not None
        seq = [(-vocab.counts[t], t) for t in vocab.index_to_token]
        assert seq == sorted(seq)


def test_load_corpus_dir_sorted_and_stripped(fixture_books_dir):
    docs = load_corpus_dir(fixture_books_dir)
    assert [d.id for d in docs] == sorted(d.id for d in docs)
    study = next(d for d in docs if d.id == "doyle_a_study_in_scarlet")
    flat = [t for s in study.sentences for t in s]
    # marker lines and trailing license text must not leak into tokens
    assert "gutenberg" not in flat


def test_load_corpus_dir_missing(tmp_path):
    with pytest.raises(ValidationError):
        load_corpus_dir(tmp_path / "nope")
