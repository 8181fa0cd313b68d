import pytest

from revnet.text_metrics import (CATEGORIES, LEXICON_DIR_ENV, Lexicon,
                                 category_percentages, load_lexicon,
                                 score_text, sentiment_score, tokenize)


def test_tokenize_lowercases_and_splits_on_non_letters():
    assert tokenize("Good, very-good! 42 results3here") == \
        ["good", "very", "good", "results", "here"]
    assert tokenize("") == []
    assert tokenize("123 !!!") == []


def small_lexicon():
    return Lexicon(
        positive=frozenset({"good", "clear"}),
        negative=frozenset({"bad", "wrong"}),
        categories={name: frozenset() for name in CATEGORIES} | {
            "negation": frozenset({"not", "never"}),
            "insight": frozenset({"think"}),
        },
    )


def test_sentiment_score_signed_ratio():
    lex = small_lexicon()
    assert sentiment_score("good good bad the", lex) == pytest.approx(1 / 4)
    assert sentiment_score("bad wrong", lex) == -1.0
    assert sentiment_score("good clear", lex) == 1.0
    assert sentiment_score("", lex) == 0.0
    assert sentiment_score("neutral words only", lex) == 0.0


def test_category_percentages():
    lex = small_lexicon()
    pct = category_percentages("not never think the end", lex)
    assert pct["negation"] == pytest.approx(40.0)
    assert pct["insight"] == pytest.approx(20.0)
    assert pct["future_tense"] == 0.0
    assert set(pct) == set(CATEGORIES)


def test_score_text_combines_both():
    lex = small_lexicon()
    score = score_text("good not bad", lex)
    assert score.token_count == 3
    assert score.sentiment == 0.0
    assert score.category_pct["negation"] == pytest.approx(100 / 3)
    empty = score_text("", lex)
    assert empty.token_count == 0 and empty.sentiment == 0.0


def test_overlapping_polarity_lists_rejected():
    with pytest.raises(ValueError):
        Lexicon(frozenset({"fine"}), frozenset({"fine"}),
                {name: frozenset() for name in CATEGORIES})


def write_lexicon_dir(root, marker_word):
    (root / "positive.txt").write_text(f"{marker_word}\nsuperb\n")
    (root / "negative.txt").write_text("awful\n")
    for name in CATEGORIES:
        (root / f"cat_{name}.txt").write_text("placeholder\n")


def test_load_lexicon_from_explicit_directory(tmp_path):
    write_lexicon_dir(tmp_path, "excellent")
    lex = load_lexicon(tmp_path)
    assert "excellent" in lex.positive and "awful" in lex.negative
    assert lex.categories["negation"] == frozenset({"placeholder"})


def test_load_lexicon_env_override(tmp_path, monkeypatch):
    write_lexicon_dir(tmp_path, "zmarker")
    monkeypatch.setenv(LEXICON_DIR_ENV, str(tmp_path))
    assert "zmarker" in load_lexicon().positive


def test_packaged_lexicon_loads_and_is_sane():
    lex = load_lexicon()
    assert lex.positive and lex.negative
    assert not (lex.positive & lex.negative)
    for name in CATEGORIES:
        assert lex.categories[name], name


def test_sentiment_bounds_and_concatenation(lexicon):
    a = "excellent clear rigorous"
    b = "flawed wrong incorrect unclear"
    sa = sentiment_score(a, lexicon)
    sb = sentiment_score(b, lexicon)
    assert -1.0 <= sb < 0 < sa <= 1.0
    combined = sentiment_score(a + " " + b, lexicon)
    assert min(sa, sb) <= combined <= max(sa, sb)
