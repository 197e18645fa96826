import pytest

from openclosure.errors import EscapeError
from openclosure.parser import parse_context, parse_type
from openclosure.scope import check_type
from openclosure.subst import scoping_checks, subst_annotated, subst_context, subst_sequence, subst_type
from openclosure.syntax import Atom

from corpus import confluence_failures

S5_CTX = "y1:a, y2:b, z:c, y:a * b"
S5_TYPE = "[y1:a^0,y2:b^0,z:c^1,y:(a * b)^{chi}](x:s^0) -> c"
PSI = (("y1", 1), ("y2", 1), ("z", 0))


def test_context_nil():
    delta, d = subst_context(parse_context("a:s, y:t"), "y", (("a", 1),))
    assert delta == () and d.rule == "Subst-Context-Nil"


def test_context_of_atoms_unchanged():
    delta, _ = subst_context(parse_context("a:s, y:t, b:s, c:t"), "y", (("a", 0),))
    assert delta == parse_context("b:s, c:t")


def test_context_drops_variable_from_closure_entries():
    ctx = parse_context("y1:a, y2:b, y:a * b, f:[y1:a^0,y2:b^0,y:(a * b)^1](x:s^0) -> a")
    delta, _ = subst_context(ctx, "y", (("y1", 1), ("y2", 1)))
    assert delta == parse_context("f:[y1:a^1,y2:b^1](x:s^0) -> a")


def test_session_type_with_unneeded_variable():
    _, tau, d = subst_type(parse_context(S5_CTX), "y", PSI, parse_type(S5_TYPE.replace("{chi}", "0")))
    assert tau == parse_type("[y1:a^0,y2:b^0,z:c^1](x:s^0) -> c")
    assert d.rule == "Subst-Closure"


def test_needed_variable_merges_its_dependencies():
    _, tau, _ = subst_type(parse_context(S5_CTX), "y", PSI, parse_type(S5_TYPE.replace("{chi}", "1")))
    assert tau == parse_type("[y1:a^1,y2:b^1,z:c^1](x:s^0) -> c")


def test_atom_unchanged():
    _, tau, d = subst_type(parse_context(S5_CTX), "y", PSI, Atom("a"))
    assert tau == Atom("a") and d.rule == "Subst-Atom"


def test_closure_not_capturing_variable():
    _, tau, d = subst_type(parse_context(S5_CTX), "y", PSI, parse_type("[y1:a^1](x:s^0) -> a"))
    assert d.rule == "Subst-Closure-Notin"
    assert tau == parse_type("[y1:a^1](x:s^0) -> a")


def test_argument_type_may_not_change():
    ctx = parse_context("u:a, x:a")
    ty = parse_type("[u:a^0,x:a^0](g:[u:a^0,x:a^1](z:a^0) -> a) -> a")
    with pytest.raises(EscapeError) as info:
        subst_type(ctx, "x", (("u", 1),), ty)
    assert info.value.name == "x"


def test_annotated_with_unneeded_variable():
    actx = (("y1", Atom("a"), 1), ("y2", Atom("b"), 0), ("y", Atom("a"), 0))
    out, tau, _ = subst_annotated(actx, "y", (("y1", 1), ("y2", 1)), Atom("a"))
    assert out == actx[:2] and tau == Atom("a")


def test_annotated_with_needed_variable():
    ctx = parse_context(S5_CTX)
    actx = tuple((n, t, d) for (n, t), d in zip(ctx, (1, 1, 0, 1)))
    out, _, _ = subst_annotated(actx, "y", PSI, Atom("c"))
    assert [d for *_, d in out] == [1, 1, 0]


def test_session_final_annotation():
    ctx = parse_context(S5_CTX)
    actx = tuple((n, t, d) for (n, t), d in zip(ctx, (0, 0, 0, 1)))
    tau = parse_type("(a * b) * " + S5_TYPE.replace("{chi}", "0"))
    out, result, _ = subst_annotated(actx, "y", PSI, tau)
    assert [(n, d) for n, _, d in out] == [("y1", 1), ("y2", 1), ("z", 0)]
    assert result == parse_type("(a * b) * [y1:a^0,y2:b^0,z:c^1](x:s^0) -> c")


def test_sequence_empty_and_single():
    actx = (("a", Atom("s"), 1), ("y", Atom("s"), 1))
    assert subst_sequence(actx, [], Atom("s"))[:2] == (actx, Atom("s"))
    single = subst_sequence(actx, [("y", (("a", 1),))], Atom("s"))
    assert single[:2] == subst_annotated(actx, "y", (("a", 1),), Atom("s"))[:2]


def test_confluence_on_generated_instances():
    checked, failures = confluence_failures(600)
    assert checked == 600 and failures == []


def test_outputs_are_well_scoped():
    # Substitution output is re-checked for scoping while the checks are active.
    ctx = parse_context(S5_CTX)
    with scoping_checks():
        delta, tau, _ = subst_type(ctx, "y", PSI, parse_type(S5_TYPE.replace("{chi}", "1")))
    check_type(ctx[:3] + delta, tau)
