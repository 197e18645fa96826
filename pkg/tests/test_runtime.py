import pytest

from openclosure.errors import MalformedPending, ValueTypeMismatch
from openclosure.evaluate import eval_open
from openclosure.parser import parse_context, parse_term, parse_type
from openclosure.runtime import (
    AtomConst,
    Captured,
    Closure,
    VPair,
    check_valuation,
    check_value,
    freshen_closure,
    subst_value,
    valuation_derivation,
)
from openclosure.syntax import Atom, Lam, Var

V = AtomConst("a", "v")
LAM_Y = Lam("z", Atom("a"), Var("y"))


def test_capture_moves_last_pending_name():
    w = Closure(("x", "y"), (), LAM_Y)
    out, d = subst_value(w, "y", V)
    assert out == Closure(("x",), (Captured("y", V),), LAM_Y)
    assert d.rule == "Subst-Value-Closure"


def test_new_captures_go_in_front():
    w = Closure(("x", "y"), (Captured("q", V),), LAM_Y)
    out, _ = subst_value(w, "y", V)
    assert [c.name for c in out.captured] == ["y", "q"]


def test_atoms_and_unrelated_closures_unchanged():
    assert subst_value(V, "y", V)[0] == V
    w = Closure(("x",), (), Lam("z", Atom("a"), Var("z")))
    out, d = subst_value(w, "y", V)
    assert out is w and d.rule == "Subst-Value-Closure-Notin"


def test_pairs_pointwise():
    w = VPair(Closure(("y",), (), LAM_Y), V)
    out, d = subst_value(w, "y", V)
    assert out.fst.pending == () and d.rule == "Subst-Value-Product"


def test_malformed_pending():
    with pytest.raises(MalformedPending):
        subst_value(Closure(("y", "x"), (), LAM_Y), "y", V)


def test_atom_typing():
    assert check_value((), V, Atom("a")).rule == "Value-Atom"
    with pytest.raises(ValueTypeMismatch):
        check_value((), V, Atom("b"))


def test_ill_typed_pair_component():
    with pytest.raises(ValueTypeMismatch):
        check_value((), VPair(V, V), parse_type("a * b"))


def test_closure_from_let_example():
    ctx = parse_context("x:a")
    v, _ = eval_open((("x", V),), parse_term(r"let y = x in \(z:a) y"), ctx)
    assert v.pending == ("x",)
    d = check_value(ctx, v, parse_type("[x:a^1](z:a^0) -> a"))
    assert d.rule == "Value-Closure"
    with pytest.raises(ValueTypeMismatch):
        check_value(ctx, v, parse_type("[x:a^0](z:a^0) -> a"))


def test_closure_without_witnesses_uses_first_order_types():
    ctx = parse_context("x:a")
    v = Closure(("x",), (Captured("y", V),), LAM_Y)
    check_value(ctx, v, parse_type("[x:a^1](z:a^0) -> a"))


def test_closure_against_wrong_prefix():
    v = Closure(("x",), (), Lam("z", Atom("a"), Var("z")))
    with pytest.raises(ValueTypeMismatch):
        check_value(parse_context("q:a"), v, parse_type("[x:a^0](z:a^1) -> a"))


def test_valuations():
    assert check_valuation((), ())
    ctx = parse_context("x:ty_x")
    assert check_valuation((("x", AtomConst("ty_x", "val_x")),), ctx)
    ctx2 = parse_context("x:a, y:b")
    V2 = (("y", AtomConst("b", "u")), ("x", V))
    assert not check_valuation(V2, ctx2)
    assert check_valuation(tuple(reversed(V2)), ctx2)
    assert valuation_derivation(tuple(reversed(V2)), ctx2).rule == "Value-Env"


def test_freshen_renames_only_clashes():
    clo = Closure(("x",), (Captured("y", V),), LAM_Y)
    assert freshen_closure(clo, {"x", "q"}) is clo
    out = freshen_closure(clo, {"x", "y", "z"})
    names = {c.name for c in out.captured}
    assert "y" not in names and out.code.param != "z"
    assert out.code.body == Var(out.captured[0].name)
