from dataclasses import replace

import pytest

from openclosure.derivation import Derivation, TypingJ
from openclosure.errors import EscapeError, IllScoped, NotAFunction, TypeMismatch, UnboundVariable
from openclosure.infer import check_derivation, infer
from openclosure.parser import parse, parse_context, parse_term, parse_type
from openclosure.scope import check_type
from openclosure.syntax import alpha_equal

from corpus import corpus


def typing(ctx, src):
    return infer(parse_context(ctx), parse_term(src))


def test_pair_with_closure():
    phi, ty, _ = typing("y:s, z:t", r"(y, \(x:r) z)")
    assert phi == (("y", 1), ("z", 0))
    assert ty == parse_type("s * [y:s^0,z:t^1](x:r^0) -> t")


def test_session_program():
    phi, ty, _ = typing("y1:a, y2:b, z:c", r"let y = (y1, y2) in (y, \(x:s) z)")
    assert phi == (("y1", 1), ("y2", 1), ("z", 0))
    assert ty == parse_type("(a * b) * [y1:a^0,y2:b^0,z:c^1](x:s^0) -> c")


def test_identity():
    phi, ty, _ = typing("", r"\(x:a) x")
    assert phi == ()
    assert ty == parse_type("[](x:a^1) -> a")


def test_projection_overapproximates():
    phi, ty, _ = typing("a:s, b:t", "let w = (a, b) in pi1 w")
    assert phi == (("a", 1), ("b", 1)) and ty == parse_type("s")


def test_unused_let_marks_nothing():
    phi, _, _ = typing("a:s, b:t", "let w = a in b")
    assert phi == (("a", 0), ("b", 1))


def test_application_uses_closure_annotations():
    phi, ty, _ = typing("a:s, b:t", r"(\(x:s) (b, x)) a")
    assert phi == (("a", 1), ("b", 1))
    assert ty == parse_type("t * s")


def test_application_of_unused_argument():
    phi, _, _ = typing("a:s, b:t", r"(\(x:s) b) a")
    assert phi == (("a", 0), ("b", 1))


def test_returned_closure_keeps_dependencies_in_its_type():
    _, ty, _ = typing("a:s", r"let f = \(x:s) \(y:s) x in f a")
    assert ty == parse_type("[a:s^1](y:s^0) -> s")


def test_fix_type():
    phi, ty, _ = typing("c:a", "fix f(x:a):a = f x")
    assert phi == (("c", 0),)
    assert isinstance(ty.result, type(parse_type("a")))


def test_escape_through_argument_type():
    src = r"let x = c in let y = c in let f = \(g:[c:int^0,u:unit^0,x:int^1](z:unit^0) -> int) g u in f"
    with pytest.raises(EscapeError) as info:
        typing("c:int, u:unit", src)
    assert info.value.name == "x"


def test_errors():
    with pytest.raises(UnboundVariable):
        typing("", "q")
    with pytest.raises(TypeMismatch):
        typing("a:s", "pi1 a")
    with pytest.raises(NotAFunction):
        typing("a:s", "a a")
    with pytest.raises(TypeMismatch):
        typing("a:s, b:t", r"(\(x:s) x) b")
    with pytest.raises(IllScoped):
        typing("a:s", r"\(g:[q:s^0](x:s^0) -> s) g")


def test_shadowing_is_renamed_apart():
    prog = parse(r"let x = a in let x = (x, x) in x", parse_context("a:s"))
    _, ty, _ = infer(prog.context, prog.term)
    assert ty == parse_type("s * s")


def test_error_carries_rule_path():
    with pytest.raises(TypeMismatch) as info:
        typing("a:s", r"let w = a in (w, pi2 a)")
    assert info.value.path[:2] == ["Let", "Pair"]


def test_derivation_checks():
    _, _, d = typing("y1:a, y2:b, z:c", r"let y = (y1, y2) in (y, \(x:s) z)")
    assert check_derivation(d) == (True, None)


def test_tampered_root_annotation_is_rejected():
    _, _, d = typing("y:s, z:t", r"(y, \(x:r) z)")
    actx = tuple((n, t, 1) for n, t, _ in d.judgment.actx)
    bad = replace(d, judgment=replace(d.judgment, actx=actx))
    ok, msg = check_derivation(bad)
    assert not ok and msg


def test_swapped_product_premises_are_rejected():
    _, _, d = typing("y:s, z:t", "(y, z)")
    bad = Derivation(d.rule, d.judgment, tuple(reversed(d.premises)))
    assert not check_derivation(bad)[0]


def test_wrong_rule_tag_is_rejected():
    _, _, d = typing("y:s", "y")
    assert not check_derivation(Derivation("Lam", d.judgment, d.premises))[0]


def test_tampered_type_is_rejected():
    _, _, d = typing("y:s", "(y, y)")
    bad = Derivation(d.rule, TypingJ(d.judgment.actx, d.judgment.term, parse_type("s")), d.premises)
    assert not check_derivation(bad)[0]


def test_generated_terms_type_and_scope():
    for _, ctx, term in corpus(300):
        phi, ty, d = infer(ctx, term)
        check_type(ctx, ty)
        assert check_derivation(d)[0]


def test_alpha_equivalent_terms_get_alpha_equal_types():
    _, t1, _ = typing("a:s", r"\(x:s) \(y:s) (x, a)")
    _, t2, _ = typing("a:s", r"\(p:s) \(q:s) (p, a)")
    assert alpha_equal(t1, t2)
