"""Stratification of parameterized names."""
from __future__ import annotations

import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gdol import Name, stratify


def test_plain_name_is_unchanged():
    assert stratify(Name("Driver")) == "Driver"


def test_single_argument():
    assert stratify(Name("performs", (Name("MotherRole"),))) == "performs_MotherRole"


def test_nested_arguments():
    n = Name("licencedFor", (Name("le", (Name("BMotorVehicle"),)),))
    assert stratify(n) == "licencedFor_le_BMotorVehicle"


def test_bracketing_variants_agree():
    # name[A, B[C]], name[A[B], C] and name[A, B, C] all collapse the same way
    a = Name("f", (Name("A"), Name("B", (Name("C"),))))
    b = Name("f", (Name("A", (Name("B"),)), Name("C")))
    c = Name("f", (Name("A"), Name("B"), Name("C")))
    assert stratify(a) == stratify(b) == stratify(c) == "f_A_B_C"


def test_name_rejects_bracket_characters():
    with pytest.raises(ValueError):
        Name("bad[name")
    with pytest.raises(ValueError):
        Name("")


def test_str_shows_brackets():
    n = Name("p", (Name("x"), Name("y")))
    assert str(n) == "p[x, y]"


_bases = st.text(alphabet=string.ascii_letters, min_size=1, max_size=6)


def _name_trees(depth: int) -> st.SearchStrategy[Name]:
    node = st.builds(Name, _bases, st.just(()))
    for _ in range(depth):
        node = st.builds(Name, _bases, st.lists(node, max_size=3).map(tuple))
    return node


def _preorder(n: Name) -> list[str]:
    out = [n.base]
    for a in n.args:
        out.extend(_preorder(a))
    return out


@given(_name_trees(3))
def test_stratification_depends_only_on_base_sequence(n: Name):
    # any two bracketings with the same left-to-right base sequence collapse
    # identically, so the flat form must equal the preorder underscore join
    s = stratify(n)
    assert s == "_".join(_preorder(n))
    assert "[" not in s and "]" not in s and "," not in s
