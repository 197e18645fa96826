"""Type substitution ``Γ, y:ρ, Δ ⊢ σ →[y\\Ψ] Γ, Δ' ⊢ τ``.

Removing ``y`` from a closure type folds ``y``'s own annotation into the
annotations of the variables its definition depended on: the captured
``Γ^Φ1, y:ρ^χ, Δ^Φ2`` becomes ``Γ^(Φ1 + χ·Ψ), Δ'^Φ2``.
"""
from __future__ import annotations

import contextlib
from functools import lru_cache

from .derivation import Derivation, SubstJ
from .errors import EscapeError, InvariantViolation
from .scope import check_context, check_type
from .syntax import Atom, Clos, Prod, alpha_equal, dep_get, dep_scale, dep_sum, fresh, names_of, rename_type, type_names

_CHECK_SCOPING = False


@contextlib.contextmanager
def scoping_checks():
    """Assert that every substitution output is well scoped while active."""
    global _CHECK_SCOPING
    old, _CHECK_SCOPING = _CHECK_SCOPING, True
    try:
        yield
    finally:
        _CHECK_SCOPING = old


def _split(ctx, y):
    names = names_of(ctx)
    if names.count(y) != 1:
        raise InvariantViolation(f"{y} must occur exactly once in [{', '.join(names)}]")
    k = names.index(y)
    return k, ctx[:k], ctx[k + 1 :]


def _check_psi(psi, gamma):
    if tuple(n for n, _ in psi) != names_of(gamma):
        raise InvariantViolation(
            f"dependency vector over [{', '.join(n for n, _ in psi)}] "
            f"does not match [{', '.join(names_of(gamma))}]"
        )


def subst_context(ctx, y, psi):
    """``Γ, y:ρ, Δ →[y\\Ψ] Γ, Δ'``; returns ``(Δ', derivation)``."""
    ctx = tuple(ctx)
    k, gamma, _ = _split(ctx, y)
    _check_psi(psi, gamma)
    delta, d = _subst_context(ctx, k, tuple(psi))
    if _CHECK_SCOPING:
        check_context(gamma + delta)
    return delta, d


@lru_cache(maxsize=100_000)
def _subst_context(ctx, k, psi):
    if len(ctx) == k + 1:
        return (), Derivation("Subst-Context-Nil", SubstJ(ctx, ctx[k][0], psi, None, ctx[:k], None))
    *prefix, (x, sigma) = ctx
    prefix = tuple(prefix)
    delta, tau, d = _subst_type(prefix, k, psi, sigma)
    out = delta + ((x, tau),)
    return out, Derivation(
        "Subst-Context", SubstJ(ctx, ctx[k][0], psi, None, ctx[:k] + out, None), (d,)
    )


def subst_type(ctx, y, psi, sigma):
    """Substitute ``y`` away from ``sigma`` in the context ``ctx = Γ, y:ρ, Δ``.

    ``psi`` is a dependency vector over ``Γ``. Returns ``(Δ', τ, derivation)``.
    Raises EscapeError when ``y`` occurs in the captured context of a
    function-argument type, which the substitution may not alter.
    """
    ctx = tuple(ctx)
    k, gamma, _ = _split(ctx, y)
    _check_psi(psi, gamma)
    delta, tau, d = _subst_type(ctx, k, tuple(psi), sigma)
    if _CHECK_SCOPING:
        check_type(gamma + delta, tau)
    return delta, tau, d


@lru_cache(maxsize=200_000)
def _subst_type(ctx, k, psi, sigma):
    y = ctx[k][0]
    if isinstance(sigma, Atom):
        delta, dc = _subst_context(ctx, k, psi)
        return delta, sigma, Derivation(
            "Subst-Atom", SubstJ(ctx, y, psi, sigma, ctx[:k] + delta, sigma), (dc,)
        )
    if isinstance(sigma, Prod):
        delta, t1, d1 = _subst_type(ctx, k, psi, sigma.left)
        _, t2, d2 = _subst_type(ctx, k, psi, sigma.right)
        tau = Prod(t1, t2)
        return delta, tau, Derivation(
            "Subst-Product", SubstJ(ctx, y, psi, sigma, ctx[:k] + delta, tau), (d1, d2)
        )
    names = sigma.names
    if names != names_of(ctx[: len(names)]):
        raise InvariantViolation(
            f"captured context [{', '.join(names)}] is not a prefix of [{', '.join(names_of(ctx))}]"
        )
    delta, dc = _subst_context(ctx, k, psi)
    if y not in names:
        return delta, sigma, Derivation(
            "Subst-Closure-Notin", SubstJ(ctx, y, psi, sigma, ctx[:k] + delta, sigma), (dc,)
        )
    inner = ctx[: len(names)]
    param = sigma.param
    result = sigma.result
    if param in names_of(ctx):
        new = fresh(param, set(names_of(ctx)) | type_names(sigma))
        result = rename_type(result, param, new)
        param = new
    _, s1, d1 = _subst_type(inner, k, psi, sigma.ptype)
    if not alpha_equal(s1, sigma.ptype):
        raise EscapeError(y, ("Subst-Closure", "argument " + param))
    inner_delta, t2, d2 = _subst_type(inner + ((param, sigma.ptype),), k, psi, result)
    chi = sigma.ctx[k][2]
    phi1 = tuple((n, d) for n, _, d in sigma.ctx[:k])
    merged = dep_sum(phi1, dep_scale(chi, psi))
    head = tuple((n, t, d) for (n, t, _), (_, d) in zip(sigma.ctx[:k], merged))
    tail = tuple(
        (n, t, d) for (n, t), (_, _, d) in zip(inner_delta[:-1], sigma.ctx[k + 1 :])
    )
    tau = Clos(head + tail, param, sigma.pdep, sigma.ptype, t2)
    return delta, tau, Derivation(
        "Subst-Closure", SubstJ(ctx, y, psi, sigma, ctx[:k] + delta, tau), (dc, d1, d2)
    )


def subst_annotated(actx, y, psi, tau):
    """``Γ^Φ1, y:ρ^χ, Δ^Φ2 ⊢ τ →[y\\Ψ] Γ^(Φ1+χ·Ψ), Δ'^Φ2 ⊢ τ'``.

    Returns ``(annotated context, τ', derivation)``.
    """
    actx = tuple(actx)
    ctx = tuple((n, t) for n, t, _ in actx)
    k, _, _ = _split(ctx, y)
    delta, out, d = subst_type(ctx, y, psi, tau)
    chi = actx[k][2]
    head = tuple((n, t, phi | (chi & dep_get(psi, n))) for n, t, phi in actx[:k])
    tail = tuple((n, t, phi) for (n, t), (_, _, phi) in zip(delta, actx[k + 1 :]))
    return head + tail, out, d


def subst_sequence(actx, bindings, tau):
    """Substitute several variables, the last-introduced first.

    ``bindings`` is a list of ``(name, psi)`` pairs listed outermost-first;
    each ``psi`` may be given over any domain and is re-expressed by name over
    the context preceding its variable at the time it is substituted.
    Returns ``(annotated context, τ, derivations)``.
    """
    derivs = []
    for name, psi in reversed(list(bindings)):
        names = names_of(actx)
        prefix = names[: names.index(name)]
        table = dict(psi)
        vec = tuple((n, table.get(n, 0)) for n in prefix)
        actx, tau, d = subst_annotated(actx, name, vec, tau)
        derivs.append(d)
    return actx, tau, derivs
