from hypothesis import given
from hypothesis import strategies as st

from openclosure.syntax import (
    Atom,
    Clos,
    Lam,
    Prod,
    Var,
    alpha_equal,
    dep_extend,
    dep_leq,
    dep_scale,
    dep_sum,
    fresh,
    free_vars,
    strengthen_type,
    weaken_type,
)
from openclosure.parser import parse_term, parse_type

NAMES = ("a", "b", "c", "d")


def vectors(n):
    return st.tuples(*[st.integers(0, 1) for _ in range(n)]).map(lambda bits: tuple(zip(NAMES, bits)))


@given(vectors(4), vectors(4))
def test_dep_sum_commutes(a, b):
    assert dep_sum(a, b) == dep_sum(b, a)


@given(vectors(4), vectors(4), vectors(4))
def test_dep_sum_associates(a, b, c):
    assert dep_sum(dep_sum(a, b), c) == dep_sum(a, dep_sum(b, c))


@given(vectors(4))
def test_dep_sum_idempotent(a):
    assert dep_sum(a, a) == a


@given(st.integers(0, 1), vectors(4), vectors(4))
def test_scale_distributes(phi, a, b):
    assert dep_scale(phi, dep_sum(a, b)) == dep_sum(dep_scale(phi, a), dep_scale(phi, b))


@given(vectors(4), vectors(4))
def test_leq_of_sum(a, b):
    assert dep_leq(a, dep_sum(a, b))
    assert dep_leq(dep_scale(0, a), b)


def test_leq_zero_extends_missing_names():
    assert dep_leq((("a", 0), ("z", 0)), (("a", 1),))
    assert not dep_leq((("z", 1),), (("a", 1),))


def test_dep_extend():
    assert dep_extend((("a", 1),), ("a", "b")) == (("a", 1), ("b", 0))
    try:
        dep_extend((("a", 1), ("b", 1)), ("a",))
    except ValueError:
        pass
    else:
        raise AssertionError("dropping a needed name must fail")


def test_dep_sum_rejects_mismatched_domains():
    try:
        dep_sum((("a", 1),), (("b", 1),))
    except ValueError:
        return
    raise AssertionError


def test_fresh_avoids():
    assert fresh("x", {"y"}) == "x"
    assert fresh("x", {"x", "x_1"}) == "x_2"


def test_alpha_equal_types_rename_param():
    t1 = parse_type("[a:s^1](x:s^0) -> [a:s^0,x:s^1](y:s^0) -> s")
    t2 = parse_type("[a:s^1](z:s^0) -> [a:s^0,z:s^1](w:s^0) -> s")
    assert alpha_equal(t1, t2)
    assert not alpha_equal(t1, parse_type("[a:s^0](z:s^0) -> [a:s^0,z:s^1](w:s^0) -> s"))


def test_alpha_equal_terms():
    assert alpha_equal(parse_term(r"\(x:a) x"), parse_term(r"\(y:a) y"))
    assert not alpha_equal(parse_term(r"\(x:a) z"), parse_term(r"\(y:a) y"))


def test_free_vars_in_order():
    assert list(free_vars(parse_term("let y = (y1, y2) in (y, z)"))) == ["y1", "y2", "z"]


def test_weaken_inserts_zero_annotated_entries():
    ty = parse_type("[a:s^1,c:s^0](x:s^0) -> s")
    ctx = (("a", Atom("s")), ("b", Atom("t")), ("c", Atom("s")), ("d", Atom("s")))
    assert weaken_type(ty, ctx) == parse_type("[a:s^1,b:t^0,c:s^0](x:s^0) -> s")


def test_weaken_leaves_unrelated_types():
    ty = parse_type("[q:s^1](x:s^0) -> s")
    assert weaken_type(ty, (("a", Atom("s")),)) == ty
    assert weaken_type(Prod(Atom("s"), Atom("t")), ()) == Prod(Atom("s"), Atom("t"))


def test_strengthen_is_inverse_of_weaken():
    ty = parse_type("[a:s^1,c:s^0](x:s^0) -> s")
    ctx = (("a", Atom("s")), ("b", Atom("t")), ("c", Atom("s")))
    assert strengthen_type(weaken_type(ty, ctx), ["b"]) == ty


def test_strengthen_refuses_needed_entries():
    assert strengthen_type(parse_type("[a:s^1](x:s^0) -> s"), ["a"]) is None


def test_nodes_are_hashable_and_compare_structurally():
    assert Lam("x", Atom("a"), Var("x")) == Lam("x", Atom("a"), Var("x"))
    assert len({Clos((), "x", 0, Atom("a"), Atom("a")), Clos((), "x", 0, Atom("a"), Atom("a"))}) == 1
