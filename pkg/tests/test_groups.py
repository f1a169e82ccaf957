import pytest

import oracle
from qiso_workbench.groups import (
    CapExceededError,
    GroupError,
    ball_cap,
    parse_group_spec,
)


@pytest.fixture
def f2():
    return parse_group_spec("free:2")


def test_free_multiply_reduces(f2):
    assert f2.format(f2.multiply(f2.parse("ab"), f2.parse("Ba"))) == "aa"


def test_cyclic_multiply():
    z5 = parse_group_spec("cyclic:5")
    assert z5.multiply(3, 4) == 2


def test_s3_composition_convention():
    s3 = parse_group_spec("s3:transpositions")
    s, t = s3.generator("s"), s3.generator("t")
    assert s3.format(s3.multiply(s, t)) == "(1 2 3)"


def test_free_length(f2):
    assert f2.length(f2.parse("abA")) == 3


def test_cyclic_length_bfs():
    z5 = parse_group_spec("cyclic:5")
    assert z5.length(3) == 2


def test_dihedral_length_of_transposition():
    s3 = parse_group_spec("s3:dihedral")
    assert s3.length(s3.parse("(1 3)")) == 2


def test_free_sphere_sizes_match_oracle(f2):
    sizes = [len(f2.sphere(n)) for n in range(5)]
    assert sizes == [1, 4, 12, 36, 108]
    assert sizes == [len(oracle.free_sphere(2, n)) for n in range(5)]


def test_cyclic6_sphere_sizes():
    z6 = parse_group_spec("cyclic:6")
    sizes = [len(z6.sphere(n)) for n in range(4)]
    assert sizes == [1, 2, 2, 1] == oracle.cyclic_sphere_sizes(6, [1, 5])


@pytest.mark.parametrize("spec", ["cyclic:7", "free:2", "freeabelian:2", "s3:transpositions", "s3:dihedral"])
def test_sphere_zero_is_identity(spec):
    g = parse_group_spec(spec)
    assert g.sphere(0) == [g.identity()]


def test_formal_words_and_reduction(f2):
    words = list(f2.formal_words(2))
    assert len(words) == 16
    assert len({f2.reduce(w) for w in words if len(f2.reduce(w)) == 2}) == 12
    assert list(f2.formal_words(0)) == [()]
    assert f2.reduce(()) == f2.identity()


def test_involution_reduces_to_identity():
    s3 = parse_group_spec("s3:transpositions")
    i = s3.labels.index("s")
    assert s3.reduce((i, i)) == s3.identity()


def test_s3_lengths_match_oracle():
    for kind in ("transpositions", "dihedral"):
        g = parse_group_spec(f"s3:{kind}")
        expected = oracle.s3_lengths(kind)
        assert sorted(expected.values()) == sorted(g.length(x) for x in g.elements())


def test_word_of_is_geodesic(f2):
    for x in f2.ball(3):
        assert f2.reduce(f2.word_of(x)) == x
        assert len(f2.word_of(x)) == f2.length(x)


def test_sphere_enumeration_is_length_lex():
    z6 = parse_group_spec("cyclic:6")
    assert z6.sphere(1) == [1, 5]


def test_ball_cap_default_and_override(monkeypatch):
    monkeypatch.delenv("QISO_BALL_CAP", raising=False)
    assert ball_cap() == 12
    monkeypatch.setenv("QISO_BALL_CAP", "3")
    g = parse_group_spec("free:2")
    with pytest.raises(CapExceededError):
        g.sphere(4)


def test_bad_specs_rejected():
    for spec in ("cyclic:0", "free:0", "nonsense", "s3:other", "cyclic:x"):
        with pytest.raises(GroupError):
            parse_group_spec(spec)


def test_freeabelian_parse_and_format():
    z2 = parse_group_spec("freeabelian:2")
    x = z2.parse("aaB")
    assert x == (2, -1)
    assert z2.format(x) == "aaB"
    assert z2.parse("(1,-2)") == (1, -2)
    assert z2.length(x) == 3
