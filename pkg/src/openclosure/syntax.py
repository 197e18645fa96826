"""Terms, types, contexts and the boolean dependency algebra.

A *context* is a tuple of ``(name, type)`` pairs, an *annotated context* a
tuple of ``(name, type, dep)`` triples and a *dependency vector* a tuple of
``(name, dep)`` pairs over the domain of some context, in the same order.
Dependencies are the integers 0 and 1.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Union


class _Node:
    """Structural node with a memoised hash; everything here is immutable."""

    __slots__ = ()

    def __hash__(self):
        try:
            return self.__dict__["_hash"]
        except KeyError:
            h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self._fields))
            object.__setattr__(self, "_hash", h)
            return h


# ---------------------------------------------------------------- types


@dataclass(frozen=True, eq=True)
class Atom(_Node):
    name: str
    _fields = ("name",)

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Prod(_Node):
    left: "Type"
    right: "Type"
    _fields = ("left", "right")

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Clos(_Node):
    """Open closure type ``[ctx](param:ptype^pdep) -> result``."""

    ctx: tuple  # annotated context: ((name, Type, dep), ...)
    param: str
    pdep: int
    ptype: "Type"
    result: "Type"
    _fields = ("ctx", "param", "pdep", "ptype", "result")

    def __hash__(self):
        return _Node.__hash__(self)

    @property
    def names(self):
        return tuple(n for n, _, _ in self.ctx)

    @property
    def plain_ctx(self):
        return tuple((n, t) for n, t, _ in self.ctx)

    @property
    def deps(self):
        return tuple((n, d) for n, _, d in self.ctx)


Type = Union[Atom, Prod, Clos]


# ---------------------------------------------------------------- terms


@dataclass(frozen=True, eq=True)
class Var(_Node):
    name: str
    _fields = ("name",)

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Pair(_Node):
    fst: "Term"
    snd: "Term"
    _fields = ("fst", "snd")

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Proj(_Node):
    index: int
    arg: "Term"
    _fields = ("index", "arg")

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"projection index must be 1 or 2, got {self.index}")

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Lam(_Node):
    param: str
    ptype: Type
    body: "Term"
    _fields = ("param", "ptype", "body")

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Fix(_Node):
    """``fix fname(param:ptype):rtype = body``; rtype is scoped in ``Γ, param``."""

    fname: str
    param: str
    ptype: Type
    rtype: Type
    body: "Term"
    _fields = ("fname", "param", "ptype", "rtype", "body")

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class App(_Node):
    fn: "Term"
    arg: "Term"
    _fields = ("fn", "arg")

    def __hash__(self):
        return _Node.__hash__(self)


@dataclass(frozen=True, eq=True)
class Let(_Node):
    name: str
    bound: "Term"
    body: "Term"
    _fields = ("name", "bound", "body")

    def __hash__(self):
        return _Node.__hash__(self)


Term = Union[Var, Pair, Proj, Lam, Fix, App, Let]


# ---------------------------------------------------------------- dependency algebra


def _check_domains(a, b):
    if tuple(n for n, _ in a) != tuple(n for n, _ in b):
        raise ValueError(
            f"dependency vectors over different domains: {[n for n, _ in a]} vs {[n for n, _ in b]}"
        )


def dep_sum(a, b):
    """Pointwise disjunction of two vectors over the same domain."""
    _check_domains(a, b)
    return tuple((n, x | y) for (n, x), (_, y) in zip(a, b))


def dep_scale(phi, vec):
    """Conjunction of a single flag with every entry of ``vec``."""
    return tuple((n, phi & d) for n, d in vec)


def dep_zero(names):
    return tuple((n, 0) for n in names)


def dep_unit(names, x):
    return tuple((n, int(n == x)) for n in names)


def dep_get(vec, name, default=0):
    for n, d in vec:
        if n == name:
            return d
    return default


def dep_extend(vec, names):
    """Re-express ``vec`` over ``names``; absent names are 0, dropped names must be 0."""
    table = dict(vec)
    extra = [n for n, d in vec if d and n not in set(names)]
    if extra:
        raise ValueError(f"cannot drop needed variables {extra}")
    return tuple((n, table.get(n, 0)) for n in names)


def dep_leq(a, b):
    """``a ⊆ b`` as pointwise implication, names missing from ``b`` counting as 0."""
    table = dict(b)
    return all(not d or table.get(n, 0) for n, d in a)


def dep_ones(vec):
    return {n for n, d in vec if d}


def names_of(ctx):
    return tuple(entry[0] for entry in ctx)


def lookup(ctx, name):
    """Type of the innermost binding of ``name`` in a plain or annotated context."""
    for entry in reversed(ctx):
        if entry[0] == name:
            return entry[1]
    return None


def annotate(ctx, vec):
    _check_domains(tuple((n, 0) for n, *_ in ctx), vec)
    return tuple((n, t, d) for (n, t), (_, d) in zip(ctx, vec))


def strip(actx):
    return tuple((n, t) for n, t, _ in actx), tuple((n, d) for n, _, d in actx)


# ---------------------------------------------------------------- names


def fresh(base, avoid):
    """A name derived from ``base`` that is not in ``avoid``."""
    root = base.split("_")[0] if "_" in base and base.rsplit("_", 1)[1].isdigit() else base
    if base not in avoid:
        return base
    for i in itertools.count(1):
        cand = f"{root}_{i}"
        if cand not in avoid:
            return cand


def type_names(ty, acc=None):
    """All variable names occurring in a type (captured contexts and params)."""
    acc = set() if acc is None else acc
    if isinstance(ty, Prod):
        type_names(ty.left, acc)
        type_names(ty.right, acc)
    elif isinstance(ty, Clos):
        for n, t, _ in ty.ctx:
            acc.add(n)
            type_names(t, acc)
        acc.add(ty.param)
        type_names(ty.ptype, acc)
        type_names(ty.result, acc)
    return acc


def type_atoms(ty, acc=None):
    acc = set() if acc is None else acc
    if isinstance(ty, Atom):
        acc.add(ty.name)
    elif isinstance(ty, Prod):
        type_atoms(ty.left, acc)
        type_atoms(ty.right, acc)
    else:
        for _, t, _ in ty.ctx:
            type_atoms(t, acc)
        type_atoms(ty.ptype, acc)
        type_atoms(ty.result, acc)
    return acc


def rename_type(ty, old, new):
    """Rename every occurrence of ``old`` in captured contexts of ``ty``."""
    if isinstance(ty, Atom):
        return ty
    if isinstance(ty, Prod):
        return Prod(rename_type(ty.left, old, new), rename_type(ty.right, old, new))
    ctx = tuple((new if n == old else n, rename_type(t, old, new), d) for n, t, d in ty.ctx)
    ptype = rename_type(ty.ptype, old, new)
    if ty.param == old:
        return Clos(ctx, ty.param, ty.pdep, ptype, ty.result)
    return Clos(ctx, ty.param, ty.pdep, ptype, rename_type(ty.result, old, new))


def term_names(term, acc=None):
    """Every name occurring in a term, bound or free, including inside annotations."""
    acc = set() if acc is None else acc
    if isinstance(term, Var):
        acc.add(term.name)
    elif isinstance(term, Pair):
        term_names(term.fst, acc)
        term_names(term.snd, acc)
    elif isinstance(term, Proj):
        term_names(term.arg, acc)
    elif isinstance(term, Lam):
        acc.add(term.param)
        type_names(term.ptype, acc)
        term_names(term.body, acc)
    elif isinstance(term, Fix):
        acc.update((term.fname, term.param))
        type_names(term.ptype, acc)
        type_names(term.rtype, acc)
        term_names(term.body, acc)
    elif isinstance(term, App):
        term_names(term.fn, acc)
        term_names(term.arg, acc)
    elif isinstance(term, Let):
        acc.add(term.name)
        term_names(term.bound, acc)
        term_names(term.body, acc)
    return acc


def free_vars(term):
    """Free term variables in order of first occurrence."""
    out = []

    def go(t, bound):
        if isinstance(t, Var):
            if t.name not in bound and t.name not in out:
                out.append(t.name)
        elif isinstance(t, Pair):
            go(t.fst, bound)
            go(t.snd, bound)
        elif isinstance(t, Proj):
            go(t.arg, bound)
        elif isinstance(t, Lam):
            go(t.body, bound | {t.param})
        elif isinstance(t, Fix):
            go(t.body, bound | {t.fname, t.param})
        elif isinstance(t, App):
            go(t.fn, bound)
            go(t.arg, bound)
        elif isinstance(t, Let):
            go(t.bound, bound)
            go(t.body, bound | {t.name})

    go(term, frozenset())
    return out


# ---------------------------------------------------------------- alpha-equivalence


def _canon_type(ty, env, depth):
    if isinstance(ty, Atom):
        return ty
    if isinstance(ty, Prod):
        return Prod(_canon_type(ty.left, env, depth), _canon_type(ty.right, env, depth))
    ctx = tuple((env.get(n, n), _canon_type(t, env, depth), d) for n, t, d in ty.ctx)
    ptype = _canon_type(ty.ptype, env, depth)
    bound = f"%{depth}"
    inner = {**env, ty.param: bound}
    return Clos(ctx, bound, ty.pdep, ptype, _canon_type(ty.result, inner, depth + 1))


@lru_cache(maxsize=200_000)
def canon_type(ty):
    """Representative of the alpha-class of ``ty``: closure params renamed by depth."""
    return _canon_type(ty, {}, 0)


def _canon_term(t, env, depth):
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Pair):
        return Pair(_canon_term(t.fst, env, depth), _canon_term(t.snd, env, depth))
    if isinstance(t, Proj):
        return Proj(t.index, _canon_term(t.arg, env, depth))
    if isinstance(t, Lam):
        ptype = _canon_type(t.ptype, env, depth)
        b = f"%t{depth}"
        return Lam(b, ptype, _canon_term(t.body, {**env, t.param: b}, depth + 1))
    if isinstance(t, Fix):
        ptype = _canon_type(t.ptype, env, depth)
        fb, xb = f"%t{depth}", f"%t{depth + 1}"
        rtype = _canon_type(t.rtype, {**env, t.param: xb}, depth + 2)
        body = _canon_term(t.body, {**env, t.fname: fb, t.param: xb}, depth + 2)
        return Fix(fb, xb, ptype, rtype, body)
    if isinstance(t, App):
        return App(_canon_term(t.fn, env, depth), _canon_term(t.arg, env, depth))
    if isinstance(t, Let):
        b = f"%t{depth}"
        bound = _canon_term(t.bound, env, depth)
        return Let(b, bound, _canon_term(t.body, {**env, t.name: b}, depth + 1))
    raise TypeError(f"not a term: {t!r}")


@lru_cache(maxsize=50_000)
def canon_term(t):
    return _canon_term(t, {}, 0)


def alpha_equal(a, b):
    """Equality up to renaming of binder-introduced names.

    Names listed in closure captured contexts are references to the ambient
    context and are compared literally unless a binder of the compared
    object itself introduces them.
    """
    if a is b:
        return True
    if isinstance(a, (Atom, Prod, Clos)) and isinstance(b, (Atom, Prod, Clos)):
        return canon_type(a) == canon_type(b)
    if isinstance(a, (Atom, Prod, Clos)) or isinstance(b, (Atom, Prod, Clos)):
        return False
    return canon_term(a) == canon_term(b)


def ctx_alpha_equal(a, b):
    """Plain or annotated contexts: same names, same deps, alpha-equal types."""
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        if x[0] != y[0] or x[2:] != y[2:] or not alpha_equal(x[1], y[1]):
            return False
    return True


# ---------------------------------------------------------------- weakening


def weaken_type(ty, ctx):
    """Re-express ``ty`` in a context obtained by inserting bindings.

    ``ctx`` is the target context. A captured context whose names all occur
    in ``ctx`` in the same order (with alpha-equal types) is widened to the
    prefix of ``ctx`` ending at its last variable; the inserted variables are
    annotated 0. Parameter and result types are weakened in their own scopes.
    Types that cannot be re-expressed come back unchanged.
    """
    return _weaken(ty, tuple(ctx))


@lru_cache(maxsize=200_000)
def _weaken(ty, ctx):
    if isinstance(ty, Atom):
        return ty
    if isinstance(ty, Prod):
        return Prod(_weaken(ty.left, ctx), _weaken(ty.right, ctx))
    index = {n: i for i, (n, _) in enumerate(ctx)}
    last = -1
    for n, t, _ in ty.ctx:
        i = index.get(n)
        if i is None or i <= last:
            return ty
        if not alpha_equal(_weaken(t, ctx[:i]), ctx[i][1]):
            return ty
        last = i
    prefix = ctx[: last + 1]
    deps = {n: d for n, _, d in ty.ctx}
    head = tuple((n, t, deps.get(n, 0)) for n, t in prefix)
    param, result = ty.param, ty.result
    if param in index and index[param] <= last:
        new = fresh(param, set(index) | type_names(ty))
        result, param = rename_type(result, param, new), new
    ptype = _weaken(ty.ptype, prefix)
    return Clos(head, param, ty.pdep, ptype, _weaken(result, prefix + ((param, ptype),)))


def strengthen_type(ty, names):
    """Drop the entries named in ``names`` from every captured context.

    Returns None when a dropped entry is annotated 1, since the type then
    genuinely depends on it.
    """
    names = frozenset(names)
    if not names:
        return ty
    return _strengthen(ty, names)


@lru_cache(maxsize=50_000)
def _strengthen(ty, names):
    if isinstance(ty, Atom):
        return ty
    if isinstance(ty, Prod):
        left, right = _strengthen(ty.left, names), _strengthen(ty.right, names)
        return None if left is None or right is None else Prod(left, right)
    ctx = []
    for n, t, d in ty.ctx:
        if n in names:
            if d:
                return None
            continue
        t = _strengthen(t, names)
        if t is None:
            return None
        ctx.append((n, t, d))
    ptype = _strengthen(ty.ptype, names)
    result = _strengthen(ty.result, names)
    if ptype is None or result is None:
        return None
    return Clos(tuple(ctx), ty.param, ty.pdep, ptype, result)


def rename_term(term, old, new):
    """Rename free occurrences of ``old`` (in terms and annotations) to ``new``."""
    t = term
    if isinstance(t, Var):
        return Var(new) if t.name == old else t
    if isinstance(t, Pair):
        return Pair(rename_term(t.fst, old, new), rename_term(t.snd, old, new))
    if isinstance(t, Proj):
        return Proj(t.index, rename_term(t.arg, old, new))
    if isinstance(t, App):
        return App(rename_term(t.fn, old, new), rename_term(t.arg, old, new))
    if isinstance(t, Lam):
        ptype = rename_type(t.ptype, old, new)
        body = t.body if t.param == old else rename_term(t.body, old, new)
        return Lam(t.param, ptype, body)
    if isinstance(t, Fix):
        ptype = rename_type(t.ptype, old, new)
        rtype = t.rtype if t.param == old else rename_type(t.rtype, old, new)
        body = t.body if old in (t.fname, t.param) else rename_term(t.body, old, new)
        return Fix(t.fname, t.param, ptype, rtype, body)
    if isinstance(t, Let):
        bound = rename_term(t.bound, old, new)
        body = t.body if t.name == old else rename_term(t.body, old, new)
        return Let(t.name, bound, body)
    raise TypeError(f"not a term: {t!r}")


def rename_all_type(ty, mapping):
    """Uniformly rename every name in ``ty`` (captured names and params)."""
    if not mapping or isinstance(ty, Atom):
        return ty
    if isinstance(ty, Prod):
        return Prod(rename_all_type(ty.left, mapping), rename_all_type(ty.right, mapping))
    return Clos(
        tuple((mapping.get(n, n), rename_all_type(t, mapping), d) for n, t, d in ty.ctx),
        mapping.get(ty.param, ty.param),
        ty.pdep,
        rename_all_type(ty.ptype, mapping),
        rename_all_type(ty.result, mapping),
    )


def rename_all_term(t, mapping):
    """Uniformly rename every name in ``t``, binders included.

    Only sound when the names in ``mapping`` are bound at most once and
    their images are unused, which the parser and the evaluators guarantee.
    """
    if not mapping:
        return t
    m = mapping.get
    if isinstance(t, Var):
        return Var(m(t.name, t.name))
    if isinstance(t, Pair):
        return Pair(rename_all_term(t.fst, mapping), rename_all_term(t.snd, mapping))
    if isinstance(t, Proj):
        return Proj(t.index, rename_all_term(t.arg, mapping))
    if isinstance(t, App):
        return App(rename_all_term(t.fn, mapping), rename_all_term(t.arg, mapping))
    if isinstance(t, Lam):
        return Lam(m(t.param, t.param), rename_all_type(t.ptype, mapping), rename_all_term(t.body, mapping))
    if isinstance(t, Fix):
        return Fix(
            m(t.fname, t.fname),
            m(t.param, t.param),
            rename_all_type(t.ptype, mapping),
            rename_all_type(t.rtype, mapping),
            rename_all_term(t.body, mapping),
        )
    if isinstance(t, Let):
        return Let(m(t.name, t.name), rename_all_term(t.bound, mapping), rename_all_term(t.body, mapping))
    raise TypeError(f"not a term: {t!r}")


def binders(t, acc=None):
    """Names introduced by binders inside ``t`` (including ``t`` itself)."""
    acc = set() if acc is None else acc
    if isinstance(t, Pair):
        binders(t.fst, acc)
        binders(t.snd, acc)
    elif isinstance(t, Proj):
        binders(t.arg, acc)
    elif isinstance(t, App):
        binders(t.fn, acc)
        binders(t.arg, acc)
    elif isinstance(t, Lam):
        acc.add(t.param)
        binders(t.body, acc)
    elif isinstance(t, Fix):
        acc.update((t.fname, t.param))
        binders(t.body, acc)
    elif isinstance(t, Let):
        acc.add(t.name)
        binders(t.bound, acc)
        binders(t.body, acc)
    return acc
