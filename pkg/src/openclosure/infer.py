"""Syntax-directed inference of ``Γ^Φ ⊢ e : σ``.

Given a context and a term, :func:`infer` computes the dependency vector,
the type and a derivation. Binders (``let`` and application) push the bound
variable out of the result type with :mod:`openclosure.subst`.
"""
from __future__ import annotations

from functools import lru_cache

from .derivation import Derivation, TypingJ
from .errors import CalculusError, NotAFunction, PrefixError, TypeMismatch, UnboundVariable
from .scope import check_context, check_type
from .subst import subst_annotated, subst_type
from .syntax import (
    App,
    Clos,
    Fix,
    Lam,
    Let,
    Pair,
    Prod,
    Proj,
    Var,
    alpha_equal,
    annotate,
    ctx_alpha_equal,
    dep_extend,
    dep_scale,
    dep_sum,
    dep_unit,
    dep_zero,
    fresh,
    lookup,
    names_of,
    rename_term,
    rename_type,
    term_names,
    type_names,
    weaken_type,
)


def infer(ctx, term, *, weaken=False):
    """Return ``(Φ, σ, derivation)`` for ``ctx^Φ ⊢ term : σ``.

    With ``weaken=True`` type annotations written for a smaller context are
    first re-expressed in ``ctx`` (see :func:`syntax.weaken_type`); the
    evaluators use this when re-typing code under a runtime context that has
    extra bindings spliced in.
    """
    return _infer(tuple(ctx), term, weaken)


def infer_type(ctx, term, *, weaken=False):
    return infer(ctx, term, weaken=weaken)[1]


def _conclude(rule, ctx, phi, term, ty, premises):
    return Derivation(rule, TypingJ(annotate(ctx, phi), term, ty), tuple(premises))


def _annotation(ty, ctx, weaken):
    if weaken:
        ty = weaken_type(ty, ctx)
    return ty, check_type(ctx, ty)


@lru_cache(maxsize=200_000)
def _infer(ctx, t, weaken):
    try:
        return _infer_rule(ctx, t, weaken)
    except CalculusError as exc:
        raise exc.with_frame(type(t).__name__)


def _binder(name, ctx, term):
    """Rename a binder that clashes with the ambient context."""
    if name not in names_of(ctx):
        return name, term
    new = fresh(name, set(names_of(ctx)) | term_names(term))
    return new, rename_term(term, name, new)


def _infer_rule(ctx, t, weaken):
    names = names_of(ctx)
    if isinstance(t, Var):
        ty = lookup(ctx, t.name)
        if ty is None:
            raise UnboundVariable(t.name)
        phi = dep_unit(names, t.name)
        return phi, ty, _conclude("Var", ctx, phi, t, ty, [check_context(ctx)])

    if isinstance(t, Pair):
        p1, s1, d1 = _infer(ctx, t.fst, weaken)
        p2, s2, d2 = _infer(ctx, t.snd, weaken)
        phi, ty = dep_sum(p1, p2), Prod(s1, s2)
        return phi, ty, _conclude("Product", ctx, phi, t, ty, [d1, d2])

    if isinstance(t, Proj):
        phi, s, d = _infer(ctx, t.arg, weaken)
        if not isinstance(s, Prod):
            raise TypeMismatch("a product type", s, f"in projection pi{t.index}")
        ty = s.left if t.index == 1 else s.right
        return phi, ty, _conclude("Proj", ctx, phi, t, ty, [d])

    if isinstance(t, Lam):
        param, body = _binder(t.param, ctx, t.body)
        ptype, dscope = _annotation(t.ptype, ctx, weaken)
        pb, tb, db = _infer(ctx + ((param, ptype),), body, weaken)
        ty = Clos(annotate(ctx, pb[:-1]), param, pb[-1][1], ptype, tb)
        phi = dep_zero(names)
        return phi, ty, _conclude("Lam", ctx, phi, t, ty, [dscope, db])

    if isinstance(t, Fix):
        return _infer_fix(ctx, t, weaken)

    if isinstance(t, App):
        pf, sf, df = _infer(ctx, t.fn, weaken)
        if not isinstance(sf, Clos):
            raise NotAFunction(sf)
        captured = sf.plain_ctx
        if not ctx_alpha_equal(captured, ctx[: len(captured)]):
            raise PrefixError(names_of(captured), names)
        pa, sa, da = _infer(ctx, t.arg, weaken)
        if not alpha_equal(sa, sf.ptype):
            raise TypeMismatch(sf.ptype, sa, "for the function argument")
        param, result = sf.param, sf.result
        if param in names:
            new = fresh(param, set(names) | type_names(sf))
            result, param = rename_type(result, param, new), new
        sub_ctx = ctx + ((param, sf.ptype),)
        _, out, ds = subst_type(sub_ctx, param, pa, weaken_type(result, sub_ctx))
        phi = dep_sum(dep_sum(pf, dep_extend(sf.deps, names)), dep_scale(sf.pdep, pa))
        return phi, out, _conclude("App", ctx, phi, t, out, [df, da, ds])

    if isinstance(t, Let):
        name, body = _binder(t.name, ctx, t.body)
        pd, s1, d1 = _infer(ctx, t.bound, weaken)
        pb, tb, db = _infer(ctx + ((name, s1),), body, weaken)
        actx = annotate(ctx + ((name, s1),), pb)
        out_ctx, out, ds = subst_annotated(actx, name, pd, tb)
        phi = tuple((n, d) for n, _, d in out_ctx)
        return phi, out, _conclude("Let", ctx, phi, t, out, [d1, db, ds])

    raise TypeError(f"not a term: {t!r}")


def fix_type(ctx, t, *, weaken=False):
    """Closure type of a ``fix`` term together with its body typing."""
    return _infer_fix(tuple(ctx), t, weaken)[1]


def _infer_fix(ctx, t, weaken):
    names = names_of(ctx)
    body = t.body
    fname, body = _binder(t.fname, ctx, body)
    param, param_old = t.param, t.param
    rtype = t.rtype
    if param in names or param == fname:
        param = fresh(param, set(names) | {fname} | term_names(body))
        body = rename_term(body, param_old, param)
        rtype = rename_type(rtype, param_old, param)
    ptype, dp = _annotation(t.ptype, ctx, weaken)
    rtype, dr = _annotation(rtype, ctx + ((param, ptype),), weaken)
    psi, phi_x = dep_zero(names), 0
    for _ in range(len(names) + 3):
        fty = Clos(annotate(ctx, psi), param, phi_x, ptype, rtype)
        body_ctx = ctx + ((fname, fty), (param, ptype))
        pb, tb, db = _infer(body_ctx, body, weaken)
        expected = weaken_type(rtype, body_ctx)
        if not alpha_equal(tb, expected):
            raise TypeMismatch(expected, tb, f"for the body of fix {t.fname}")
        grown = dep_sum(psi, pb[: len(names)])
        grown_x = phi_x | pb[-1][1]
        if grown == psi and grown_x == phi_x:
            break
        psi, phi_x = grown, grown_x
    phi = dep_zero(names)
    return phi, fty, _conclude("Fix", ctx, phi, t, fty, [dp, dr, db])


# ---------------------------------------------------------------- independent validator


def check_derivation(d):
    """Re-verify every node of a typing derivation against its rule schema.

    Returns ``(True, None)`` or ``(False, message)`` naming the first bad node
    by its path of rule tags. Inference is never re-run; only local
    consistency between a node and its premises is checked.
    """
    try:
        _check(d, ["root"])
    except _Bad as bad:
        return False, str(bad)
    return True, None


class _Bad(Exception):
    pass


def _require(cond, path, msg):
    if not cond:
        raise _Bad(f"{' > '.join(path)}: {msg}")


def _typing(d, path, rule=None):
    _require(isinstance(d.judgment, TypingJ), path, "expected a typing judgment")
    if rule is not None:
        _require(d.rule == rule, path, f"expected rule {rule}, found {d.rule}")


def _check(d, path):
    _typing(d, path)
    j = d.judgment
    actx, t, ty = j.actx, j.term, j.ty
    ctx = tuple((n, x) for n, x, _ in actx)
    phi = tuple((n, p) for n, _, p in actx)
    names = names_of(ctx)
    here = path + [d.rule]
    expected_rule = {Var: "Var", Pair: "Product", Proj: "Proj", Lam: "Lam", Fix: "Fix", App: "App", Let: "Let"}
    _require(d.rule == expected_rule[type(t)], here, f"rule {d.rule} does not match term")

    def premise(i, term, pctx):
        p = d.premises[i]
        _typing(p, here)
        pj = p.judgment
        _require(pj.term == term, here, f"premise {i + 1} concludes about the wrong subterm")
        _require(
            ctx_alpha_equal(tuple((n, x) for n, x, _ in pj.actx), pctx),
            here,
            f"premise {i + 1} has the wrong context",
        )
        _check(p, here)
        return tuple((n, q) for n, _, q in pj.actx), pj.ty

    if isinstance(t, Var):
        _require(len(d.premises) == 1 and d.premises[0].rule.startswith("Scope-Context"), here, "missing scoping premise")
        _require(phi == dep_unit(names, t.name), here, "annotation must be 1 exactly at the variable")
        _require(alpha_equal(ty, lookup(ctx, t.name)), here, "type differs from the context")
    elif isinstance(t, Pair):
        _require(len(d.premises) == 2, here, "Product needs two premises")
        p1, s1 = premise(0, t.fst, ctx)
        p2, s2 = premise(1, t.snd, ctx)
        _require(phi == dep_sum(p1, p2), here, "annotation is not the sum of the premises")
        _require(alpha_equal(ty, Prod(s1, s2)), here, "type is not the product of the premises")
    elif isinstance(t, Proj):
        _require(len(d.premises) == 1, here, "Proj needs one premise")
        p, s = premise(0, t.arg, ctx)
        _require(isinstance(s, Prod), here, "premise is not a product")
        _require(phi == p, here, "annotation differs from the premise")
        _require(alpha_equal(ty, s.left if t.index == 1 else s.right), here, "wrong component")
    elif isinstance(t, Lam):
        _require(len(d.premises) == 2, here, "Lam needs a scoping and a typing premise")
        _require(isinstance(ty, Clos), here, "Lam must produce a closure type")
        _require(phi == dep_zero(names), here, "closure creation must not depend on the context")
        pb_d = d.premises[1]
        _typing(pb_d, here)
        pj = pb_d.judgment
        _require(len(pj.actx) == len(ctx) + 1, here, "body context must extend the context by the parameter")
        x, xty, xdep = pj.actx[-1]
        _require(ctx_alpha_equal(tuple((n, s) for n, s, _ in pj.actx[:-1]), ctx), here, "body context prefix differs")
        _check(pb_d, here)
        built = Clos(pj.actx[:-1], x, xdep, xty, pj.ty)
        _require(alpha_equal(ty, built), here, "closure type does not match the body typing")
    elif isinstance(t, Fix):
        _require(isinstance(ty, Clos) and phi == dep_zero(names), here, "Fix must produce a closure with zero annotation")
        pb_d = d.premises[-1]
        _typing(pb_d, here)
        pj = pb_d.judgment
        _require(len(pj.actx) == len(ctx) + 2, here, "body context must bind the function and parameter")
        (_, fty, _), (_, xty, xdep) = pj.actx[-2], pj.actx[-1]
        _require(alpha_equal(fty, ty), here, "recursive binding has the wrong type")
        _require(xdep == ty.pdep and alpha_equal(xty, ty.ptype), here, "parameter annotation mismatch")
        body_phi = tuple((n, q) for n, _, q in pj.actx[: len(ctx)])
        _require(all(not b or a for (_, a), (_, b) in zip(ty.deps, body_phi)), here, "closure annotation misses body dependencies")
        _check(pb_d, here)
    elif isinstance(t, Let):
        _require(len(d.premises) == 3, here, "Let needs two typings and a substitution")
        pd, s1 = premise(0, t.bound, ctx)
        pb_d = d.premises[1]
        _typing(pb_d, here)
        pj = pb_d.judgment
        _require(len(pj.actx) == len(ctx) + 1, here, "body context must extend the context")
        x = pj.actx[-1][0]
        _require(alpha_equal(pj.actx[-1][1], s1), here, "let-bound variable has the wrong type")
        _check(pb_d, here)
        out_ctx, out, _ = subst_annotated(pj.actx, x, pd, pj.ty)
        _require(phi == tuple((n, q) for n, _, q in out_ctx), here, "annotation is not φ·Φdef + Φbody")
        _require(alpha_equal(ty, out), here, "type is not the substituted body type")
        sj = d.premises[2].judgment
        _require(alpha_equal(sj.out_ty, ty), here, "substitution premise concludes a different type")
    elif isinstance(t, App):
        _require(len(d.premises) == 3, here, "App needs two typings and a substitution")
        pf, sf = premise(0, t.fn, ctx)
        _require(isinstance(sf, Clos), here, "function premise is not a closure type")
        pa, sa = premise(1, t.arg, ctx)
        _require(alpha_equal(sa, sf.ptype), here, "argument type mismatch")
        expect = dep_sum(dep_sum(pf, dep_extend(sf.deps, names)), dep_scale(sf.pdep, pa))
        _require(phi == expect, here, "annotation is not Φfun + Φclos + φ·Φarg")
        sj = d.premises[2].judgment
        _require(alpha_equal(sj.out_ty, ty), here, "type is not the substitution output")
        _require(sj.psi == pa, here, "substitution uses a vector other than Φarg")
