"""Values, value substitution and value typing.

A closure value ``(pending, captured, code)`` lists the ambient variables it
has not captured yet and the ``(name, value)`` bindings it has absorbed so far,
most recently captured first. ``captured`` is therefore in telescope order:
each value was computed in a context containing the bindings before it.

Every :class:`Captured` entry may carry the witnesses of the existential
premises of value typing: the type ``τ_i`` of the captured variable and the
dependency vector ``Ψ_i`` of the definition it was bound to. The evaluator
records them when it knows the typing context; they do not take part in
equality.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .derivation import Derivation, ValueSubstJ, ValueTypingJ
from .errors import CalculusError, MalformedPending, ValueTypeMismatch, WitnessNotFound
from .infer import infer
from .scope import check_context
from .subst import subst_sequence
from .syntax import (
    Atom,
    Clos,
    Fix,
    Prod,
    alpha_equal,
    ctx_alpha_equal,
    names_of,
    rename_all_term,
    rename_term,
    rename_type,
    strengthen_type,
    weaken_type,
)


@dataclass(frozen=True)
class AtomConst:
    atom: str
    name: str


@dataclass(frozen=True)
class VPair:
    fst: Any
    snd: Any


@dataclass(frozen=True)
class Captured:
    name: str
    value: Any
    wtype: Optional[Any] = field(default=None, compare=False)
    wdeps: Optional[tuple] = field(default=None, compare=False)


@dataclass(frozen=True)
class Closure:
    pending: tuple
    captured: tuple  # of Captured, telescope order
    code: Any  # Lam or Fix

    @property
    def env(self):
        return tuple((c.name, c.value) for c in self.captured)


@dataclass(frozen=True)
class ClassicClosure:
    env: tuple  # ((name, value), ...)
    code: Any


Value = Any


# ---------------------------------------------------------------- substitution


def subst_value(w, y, v, wtype=None, wdeps=None):
    """``w →[y\\v] w'``; returns ``(w', derivation)``.

    ``wtype``/``wdeps`` are recorded on the new captured entry as typing
    witnesses.
    """
    out, rule, prem = _subst_value(w, y, v, wtype, wdeps)
    return out, Derivation(rule, ValueSubstJ(w, y, v, out), prem)


def _subst_value(w, y, v, wtype, wdeps):
    if isinstance(w, AtomConst):
        return w, "Subst-Value-Atom", ()
    if isinstance(w, VPair):
        a, da = subst_value(w.fst, y, v, wtype, wdeps)
        b, db = subst_value(w.snd, y, v, wtype, wdeps)
        return VPair(a, b), "Subst-Value-Product", (da, db)
    if isinstance(w, Closure):
        if y not in w.pending:
            return w, "Subst-Value-Closure-Notin", ()
        if w.pending[-1] != y:
            raise MalformedPending(y, w.pending)
        cap = Captured(y, v, wtype, wdeps)
        return Closure(w.pending[:-1], (cap,) + w.captured, w.code), "Subst-Value-Closure", ()
    raise TypeError(f"not an open-semantics value: {w!r}")


def subst_values(w, bindings):
    """The ``⇒[V2]`` chain: substitute ``Captured`` bindings, last one first."""
    derivs = []
    for cap in reversed(bindings):
        w, d = subst_value(w, cap.name, cap.value, cap.wtype, cap.wdeps)
        derivs.append(d)
    return w, derivs


# ---------------------------------------------------------------- alpha-renaming of values


def rename_free_value(v, mapping):
    """Rename references to ambient variables inside ``v``."""
    if not mapping or isinstance(v, AtomConst):
        return v
    if isinstance(v, VPair):
        return VPair(rename_free_value(v.fst, mapping), rename_free_value(v.snd, mapping))
    if isinstance(v, Closure):
        code = v.code
        for old, new in mapping.items():
            if old in v.pending:
                code = rename_term(code, old, new)
        caps = tuple(
            Captured(
                c.name,
                rename_free_value(c.value, mapping),
                _rename_type_refs(c.wtype, mapping),
                _rename_vec(c.wdeps, mapping),
            )
            for c in v.captured
        )
        return Closure(tuple(mapping.get(n, n) for n in v.pending), caps, code)
    return v


def _rename_type_refs(ty, mapping):
    if ty is None:
        return None
    for old, new in mapping.items():
        ty = rename_type(ty, old, new)
    return ty


def _rename_vec(vec, mapping):
    if vec is None:
        return None
    return tuple((mapping.get(n, n), d) for n, d in vec)


def freshen_closure(clo, avoid):
    """Alpha-rename the bound names of ``clo`` that occur in ``avoid``.

    Bound names are the captured variables and every binder of the code.
    Returns the closure unchanged when nothing clashes.
    """
    from .syntax import binders, fresh, term_names

    avoid = set(avoid)
    bound = binders(clo.code) | {c.name for c in clo.captured}
    clash = sorted(bound & avoid)
    if not clash:
        return clo
    taken = avoid | bound | term_names(clo.code) | set(clo.pending)
    mapping = {}
    for n in clash:
        mapping[n] = fresh(n, taken)
        taken.add(mapping[n])
    caps = []
    seen = {}
    for c in clo.captured:
        caps.append(
            Captured(
                mapping.get(c.name, c.name),
                rename_free_value(c.value, seen),
                _rename_type_refs(c.wtype, seen),
                _rename_vec(c.wdeps, seen),
            )
        )
        if c.name in mapping:
            seen = {**seen, c.name: mapping[c.name]}
    return Closure(clo.pending, tuple(caps), rename_all_term(clo.code, mapping))


# ---------------------------------------------------------------- value typing


def synthesize_type(v):
    """The type of a first-order value (atoms and pairs)."""
    if isinstance(v, AtomConst):
        return Atom(v.atom)
    if isinstance(v, VPair):
        return Prod(synthesize_type(v.fst), synthesize_type(v.snd))
    raise WitnessNotFound("no recorded type for a captured closure value")


def captured_types(ctx, clo):
    """Witness types of the captured entries, weakened into ``ctx + prior``."""
    inner = tuple(ctx)
    out = []
    for c in clo.captured:
        ty = synthesize_type(c.value) if c.wtype is None else weaken_type(c.wtype, inner)
        out.append(ty)
        inner = inner + ((c.name, ty),)
    return out, inner




def check_value(ctx, v, ty):
    """Derivation of ``ctx ⊢ v : ty``; raises ValueTypeMismatch."""
    return _check_value(tuple(ctx), v, ty)


def _mismatch(msg, ctx, v, ty):
    from .printer import print_type, print_value

    return ValueTypeMismatch(f"ValueTypeMismatch: {msg}: {print_value(v)} against {print_type(ty)}")


def _check_value(ctx, v, ty):
    j = ValueTypingJ(ctx, v, ty)
    if isinstance(v, AtomConst):
        if not (isinstance(ty, Atom) and ty.name == v.atom):
            raise _mismatch("atom of the wrong type", ctx, v, ty)
        return Derivation("Value-Atom", j, (check_context(ctx),))
    if isinstance(v, VPair):
        if not isinstance(ty, Prod):
            raise _mismatch("pair against a non-product type", ctx, v, ty)
        try:
            d1 = _check_value(ctx, v.fst, ty.left)
            d2 = _check_value(ctx, v.snd, ty.right)
        except CalculusError as exc:
            raise exc.with_frame("Value-Product")
        return Derivation("Value-Product", j, (d1, d2))
    if not isinstance(v, Closure):
        raise _mismatch("not an open-semantics value", ctx, v, ty)
    if not isinstance(ty, Clos):
        raise _mismatch("closure against a non-closure type", ctx, v, ty)
    rule = "Value-Closure-Fix" if isinstance(v.code, Fix) else "Value-Closure"
    try:
        return _check_closure(ctx, v, ty, j, rule)
    except CalculusError as exc:
        if isinstance(exc, ValueTypeMismatch):
            raise exc.with_frame(rule)
        raise _mismatch(str(exc), ctx, v, ty).with_frame(rule)


def _check_closure(ctx, v, ty, j, rule):
    k = len(ty.ctx)
    if not ctx_alpha_equal(ctx[:k], ty.plain_ctx):
        raise _mismatch("captured context is not a prefix of the ambient context", ctx, v, ty)
    if ty.names != v.pending:
        return _check_weakened(ctx, v, ty, j, rule)
    whole = check_context(ctx)
    gamma = ctx[:k]
    inner = gamma
    premises = [whole]
    for c in v.captured:
        cty = synthesize_type(c.value) if c.wtype is None else weaken_type(c.wtype, inner)
        premises.append(_check_value(inner, c.value, cty))
        inner = inner + ((c.name, cty),)
    _, fty, dbody = infer(inner, v.code, weaken=True)
    premises.append(dbody)
    actx = fty.ctx + ((fty.param, fty.ptype, fty.pdep),)
    target = ty.deps
    bindings = []
    for c in v.captured:
        psi = c.wdeps
        if psi is None:
            # No recorded witness: the external annotation itself is the
            # largest choice that cannot overshoot the target.
            psi = target
        bindings.append((c.name, psi))
    out_ctx, out, sds = subst_sequence(actx, bindings, fty.result)
    premises.extend(sds)
    got = Clos(out_ctx[:-1], fty.param, out_ctx[-1][2], fty.ptype, out)
    if not alpha_equal(got, ty):
        from .printer import print_type

        raise _mismatch(f"closure inhabits {print_type(got)}", ctx, v, ty)
    return Derivation(rule, j, tuple(premises))


def strengthen_for(ctx, v, ty):
    """Drop from ``ctx`` and ``ty`` the captured names missing from ``v.pending``.

    A closure built before some bindings were inserted into its scope (the
    extra segment of the caller's valuation at an application) still lists
    the old names. Returns ``(ctx', ty')`` over exactly the pending names, or
    None when that is impossible.
    """
    skipped = [n for n in ty.names if n not in v.pending]
    if tuple(n for n in ty.names if n in v.pending) != v.pending:
        return None
    sty = strengthen_type(ty, skipped)
    sctx = []
    for n, t in ctx[: len(ty.ctx)]:
        if n in skipped:
            continue
        t = strengthen_type(t, skipped)
        if t is None:
            return None
        sctx.append((n, t))
    if sty is None or len(sctx) != len(v.pending):
        return None
    return tuple(sctx), sty


def _check_weakened(ctx, v, ty, j, rule):
    reduced = strengthen_for(ctx, v, ty)
    if reduced is None:
        raise _mismatch("pending list differs from the captured context of the type", ctx, v, ty)
    sctx, sty = reduced
    inner = _check_closure(sctx, v, sty, ValueTypingJ(sctx, v, sty), rule)
    return Derivation("Value-Weaken", j, (check_context(ctx), inner))


def value_type_ok(ctx, v, ty):
    try:
        check_value(ctx, v, ty)
    except CalculusError:
        return False
    return True


def check_valuation(V, ctx):
    """``V : Γ ⊢``: same names in the same order, each value typed in its prefix."""
    V, ctx = tuple(V), tuple(ctx)
    if names_of(V) != names_of(ctx):
        return False
    for i, ((_, v), (_, ty)) in enumerate(zip(V, ctx)):
        if not value_type_ok(ctx[:i], v, ty):
            return False
    return True


def valuation_derivation(V, ctx):
    """Derivation of ``V : Γ ⊢`` (rules Value-Env-Empty / Value-Env)."""
    from .derivation import ScopeJ

    d = Derivation("Value-Env-Empty", ScopeJ(()))
    for i, ((n, v), (m, ty)) in enumerate(zip(V, ctx)):
        if n != m:
            raise ValueTypeMismatch(f"ValueTypeMismatch: valuation binds {n} where the context binds {m}")
        d = Derivation("Value-Env", ScopeJ(ctx[: i + 1]), (d, check_value(ctx[:i], v, ty)))
    return d
