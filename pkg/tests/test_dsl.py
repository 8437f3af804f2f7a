"""Definition-file parsing, printing, and realization."""

import glob
from fractions import Fraction

import pytest

from bihom.algebra import (
    BiHomAssociativeAlgebra,
    BiHomDialgebra,
    assoc_readings,
    catalog,
)
from bihom.deformation import TruncatedDeformation
from bihom.dsl import DslError, build_all, build_block, parse, parse_path, print_definition


CORPUS = sorted(glob.glob("corpus/*.dlg"))


def test_corpus_is_present():
    assert len(CORPUS) == 11


def test_corpus_round_trips_byte_stable():
    """The canonical printer reproduces every shipped file exactly."""
    for path in CORPUS:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        df = parse(text)
        assert print_definition(df) == text, path
        assert parse(print_definition(df)) == df, path


def test_print_is_idempotent_on_noncanonical_input():
    text = "dialgebra   X{dim 2;basis e1 e2;dashv(e1,e1)=2*e1+e2;phi(e1)=e1;psi(e1)=e1;}"
    once = print_definition(parse(text))
    assert print_definition(parse(once)) == once
    assert "dashv(e1, e1) = 2*e1 + e2;" in once


def same_dialgebra(A, B):
    return (
        A.dim == B.dim
        and A.dashv == B.dashv
        and A.vdash == B.vdash
        and A.phi == B.phi
        and A.psi == B.psi
    )


def test_corpus_dialgebras_match_catalog_builds():
    entries = catalog()
    for path in CORPUS:
        df = parse_path(path)
        for block in df.blocks:
            if getattr(block, "kind", None) != "dialgebra":
                continue
            built = build_block(df, block.name)
            assert isinstance(built, BiHomDialgebra)
            ref = entries[block.name].build(**{p: v for p, v in block.params})
            assert same_dialgebra(built, ref), block.name


def test_corpus_readings_match_builtin_pair():
    df = parse_path("corpus/ex43.dlg")
    readings = assoc_readings()
    pairs = {"Ex43_readingA": "Assoc3_A", "Ex43_readingB": "Assoc3_B"}
    for block_name, builtin in pairs.items():
        built = build_block(df, block_name)
        assert isinstance(built, BiHomAssociativeAlgebra)
        ref = readings[builtin]
        assert built.mul == ref.mul
        assert built.phi == ref.phi and built.psi == ref.psi


def test_lexical_error_fixture():
    with pytest.raises(DslError) as exc:
        parse_path("tests/fixtures/lexical.dlg")
    e = exc.value
    assert (e.kind, e.line, e.col) == ("lexical", 4, 22)
    assert str(e) == "lexical error at line 4, column 22: unexpected character '@'"


def test_unknown_basis_fixture():
    with pytest.raises(DslError) as exc:
        parse_path("tests/fixtures/unknown_basis.dlg")
    e = exc.value
    assert (e.kind, e.line, e.col) == ("semantic", 4, 3)
    assert str(e) == "semantic error at line 4, column 3: unknown basis name 'e3'"


def test_conflicting_entry_fixture():
    with pytest.raises(DslError) as exc:
        parse_path("tests/fixtures/conflicting.dlg")
    e = exc.value
    assert (e.kind, e.line) == ("semantic", 7)
    assert str(e).endswith("conflicting entry for mul(e1, e2)")


def test_syntax_error_reports_location():
    with pytest.raises(DslError) as exc:
        parse("dialgebra X {\n  dim 2\n  basis e1 e2;\n}")
    assert exc.value.kind == "syntax"
    assert exc.value.line == 3


def test_identical_repeated_entry_is_tolerated():
    text = (
        "dialgebra X {\n  dim 2;\n  basis e1 e2;\n"
        "  dashv(e1, e2) = e1;\n  dashv(e1, e2) = e1;\n}\n"
    )
    df = parse(text)
    block = df.blocks[0]
    assert len(block.entries) == 1
    # differing right side with the same key is a conflict
    with pytest.raises(DslError, match="conflicting entry"):
        parse(text.replace("dashv(e1, e2) = e1;\n}", "dashv(e1, e2) = e2;\n}"))


def test_unbound_parameter_rejected():
    with pytest.raises(DslError, match="unbound parameter 'b'"):
        parse("dialgebra X {\n  dim 1;\n  basis e1;\n  dashv(e1, e1) = b*e1;\n}")


def test_parameters_resolve_with_declared_defaults():
    text = (
        "dialgebra X {\n  dim 2;\n  basis e1 e2;\n  param a = -3/2;\n"
        "  dashv(e2, e2) = a*e1 + a*e2;\n}\n"
    )
    A = build_block(parse(text), "X")
    assert A.dashv[1][1] == (Fraction(-3, 2), Fraction(-3, 2))


def test_cancelling_terms_build_to_zero():
    text = (
        "dialgebra X {\n  dim 2;\n  basis e1 e2;\n"
        "  dashv(e1, e1) = e1 + -1*e1;\n}\n"
    )
    A = build_block(parse(text), "X")
    assert A.dashv[0][0] == (0, 0)


def test_block_kind_restricts_entry_ops():
    with pytest.raises(DslError, match="'mul' not allowed in 'dialgebra'"):
        parse("dialgebra X {\n  dim 1;\n  basis e1;\n  mul(e1, e1) = e1;\n}")
    with pytest.raises(DslError, match="'dashv' not allowed in 'algebra'"):
        parse("algebra X {\n  dim 1;\n  basis e1;\n  dashv(e1, e1) = e1;\n}")


def test_deformation_term_order_bounds():
    head = (
        "dialgebra B {\n  dim 2;\n  basis e1 e2;\n  phi(e2) = e1;\n  psi(e2) = e1;\n}\n\n"
    )
    with pytest.raises(DslError, match="term order 3 outside 1..2"):
        parse(head + "deformation D of B {\n  order 2;\n  term 3 dashv(e2, e2) = e1;\n}")
    with pytest.raises(DslError, match="unknown base"):
        parse("deformation D of Nope {\n  order 1;\n}")


def test_duplicate_block_names_rejected():
    text = "dialgebra X {\n  dim 1;\n  basis e1;\n}\n\ndialgebra X {\n  dim 1;\n  basis e1;\n}"
    with pytest.raises(DslError, match="duplicate block name"):
        parse(text)


def test_build_all_realizes_every_block():
    df = parse_path("corpus/deform_alg2_2.dlg")
    objs = build_all(df)
    assert set(objs) == {"Alg2_2", "D1"}
    assert isinstance(objs["Alg2_2"], BiHomDialgebra)
    assert isinstance(objs["D1"], TruncatedDeformation)
    assert objs["D1"].order == 2
    assert objs["D1"].term(1).value(0, (1, 1)) == (Fraction(1, 2), 0)
    assert objs["D1"].term(2).value(1, (1, 1)) == (-3, 0)


def test_comments_and_whitespace_are_ignored():
    text = (
        "# leading remark\n"
        "dialgebra X { # trailing\n  dim 1;\n  basis e1;\n  # inner\n  dashv(e1, e1) = e1;\n}\n"
    )
    A = build_block(parse(text), "X")
    assert A.dashv[0][0] == (1,)
