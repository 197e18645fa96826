"""Well-scoping of contexts (``Γ ⊢``) and types (``Γ ⊢ σ``)."""
from __future__ import annotations

from functools import lru_cache

from .derivation import Derivation, ScopeJ
from .errors import IllScoped, NotPrefix
from .syntax import Atom, Clos, Prod, alpha_equal


@lru_cache(maxsize=100_000)
def check_context(ctx):
    """Derivation of ``ctx ⊢``; raises IllScoped or NotPrefix."""
    ctx = tuple(ctx)
    if not ctx:
        return Derivation("Scope-Context-Nil", ScopeJ(ctx))
    names = [n for n, _ in ctx]
    if len(set(names)) != len(names):
        dup = next(n for n in names if names.count(n) > 1)
        raise IllScoped(dup, None).with_frame("Scope-Context")
    *prefix, (_, ty) = ctx
    return Derivation("Scope-Context", ScopeJ(ctx), (check_type(tuple(prefix), ty),))


@lru_cache(maxsize=200_000)
def check_type(ctx, ty):
    """Derivation of ``ctx ⊢ ty``.

    A closure's captured context must be a literal prefix of ``ctx``: same
    names in the same order with alpha-equal types.
    """
    ctx = tuple(ctx)
    if isinstance(ty, Atom):
        return Derivation("Scope-Atom", ScopeJ(ctx, ty), (check_context(ctx),))
    if isinstance(ty, Prod):
        return Derivation(
            "Scope-Product", ScopeJ(ctx, ty), (check_type(ctx, ty.left), check_type(ctx, ty.right))
        )
    if not isinstance(ty, Clos):
        raise TypeError(f"not a type: {ty!r}")
    captured = ty.plain_ctx
    ambient = [n for n, _ in ctx]
    for i, (n, t) in enumerate(captured):
        if n not in ambient:
            raise IllScoped(n, ty)
        if i >= len(ctx) or ctx[i][0] != n or not alpha_equal(ctx[i][1], t):
            raise NotPrefix([m for m, _ in captured], ambient)
    whole = check_context(ctx)
    inner = ctx[: len(captured)]
    if ty.param in ambient[: len(captured)]:
        raise IllScoped(ty.param, ty)
    param = check_type(inner, ty.ptype)
    result = check_type(inner + ((ty.param, ty.ptype),), ty.result)
    return Derivation("Scope-Closure", ScopeJ(ctx, ty), (whole, param, result))


def is_well_scoped(ctx, ty=None):
    try:
        if ty is None:
            check_context(tuple(ctx))
        else:
            check_type(tuple(ctx), ty)
    except (IllScoped, NotPrefix):
        return False
    return True
