"""The two big-step evaluators and the cross-semantics equivalence.

``eval_open`` implements incremental capture: closures capture nothing when
they are built and absorb bindings one at a time as binders leave scope.
``eval_classic`` is the usual environment-capturing semantics.

When ``eval_open`` is given the typing context of its valuation it runs
inference alongside evaluation and stores, on every captured binding, the
type and dependency vector that value typing later needs as witnesses.
"""
from __future__ import annotations

import sys

from .derivation import Derivation, ReductionJ
from .errors import BudgetExceeded, CalculusError, InvariantViolation, PrefixError, StuckError, UnboundVariable
from .infer import infer
from .runtime import (
    AtomConst,
    ClassicClosure,
    Closure,
    VPair,
    check_value,
    freshen_closure,
    subst_value,
    synthesize_type,
)
from .subst import subst_type
from .syntax import App, Fix, Lam, Let, Pair, Proj, Var, alpha_equal, free_vars, names_of, rename_all_term, weaken_type

DEFAULT_MAX_STEPS = 10**6
_MAX_DEPTH = 2500


def _ensure_stack():
    if sys.getrecursionlimit() < 20_000:
        sys.setrecursionlimit(20_000)


def _lookup(env, name):
    for n, v in reversed(env):
        if n == name:
            return v
    raise UnboundVariable(name)


class _Budget:
    def __init__(self, max_steps):
        self.max_steps = max_steps
        self.steps = 0

    def tick(self, depth):
        self.steps += 1
        if self.steps > self.max_steps or depth > _MAX_DEPTH:
            raise BudgetExceeded(self.max_steps)


# ---------------------------------------------------------------- open semantics


def eval_open(V, e, ctx=None, *, max_steps=DEFAULT_MAX_STEPS, self_check=False):
    """``V ⊢ e ⇒ v``; returns ``(v, derivation)``.

    ``ctx`` is the typing context of ``V``. With it, captured bindings carry
    value-typing witnesses. ``self_check`` (which needs ``ctx``) asserts
    preservation of value typing at every value-substitution step and raises
    InvariantViolation when it fails.
    """
    _ensure_stack()
    if self_check and ctx is None:
        raise ValueError("self_check needs the typing context")
    ev = _Open(_Budget(max_steps), self_check)
    return ev.eval(tuple(V), None if ctx is None else tuple(ctx), e, 0)


class _Open:
    def __init__(self, budget, self_check):
        self.budget = budget
        self.self_check = self_check
        self.preservation_checks = 0

    def eval(self, V, G, e, depth):
        self.budget.tick(depth)
        try:
            return self._eval(V, G, e, depth)
        except RecursionError:
            raise BudgetExceeded(self.budget.max_steps)

    def _eval(self, V, G, e, depth):
        def done(rule, v, prem=()):
            return v, Derivation(rule, ReductionJ(V, e, v), tuple(prem))

        if isinstance(e, Var):
            return done("Red-Var", _lookup(V, e.name))
        if isinstance(e, Lam):
            return done("Red-Lam", Closure(names_of(V), (), e))
        if isinstance(e, Fix):
            return done("Red-Lam-Fix", Closure(names_of(V), (), e))
        if isinstance(e, Pair):
            v1, d1 = self.eval(V, G, e.fst, depth + 1)
            v2, d2 = self.eval(V, G, e.snd, depth + 1)
            return done("Red-Pair", VPair(v1, v2), (d1, d2))
        if isinstance(e, Proj):
            v, d = self.eval(V, G, e.arg, depth + 1)
            if not isinstance(v, VPair):
                raise StuckError(f"StuckError: projection of a non-pair in pi{e.index}")
            return done("Red-Proj", v.fst if e.index == 1 else v.snd, (d,))
        if isinstance(e, Let):
            v1, d1 = self.eval(V, G, e.bound, depth + 1)
            s1 = pd = G2 = None
            if G is not None:
                pd, s1, _ = infer(G, e.bound, weaken=True)
                G2 = G + ((e.name, s1),)
            V2 = V + ((e.name, v1),)
            v2, d2 = self.eval(V2, G2, e.body, depth + 1)
            out, ds = subst_value(v2, e.name, v1, s1, pd)
            if self.self_check:
                body_ty = infer(G2, e.body, weaken=True)[1]
                self._check_preservation(G, e.name, s1, pd, v1, v2, body_ty, out)
            return done("Red-Let", out, (d1, d2, ds))
        if isinstance(e, App):
            return self._app(V, G, e, depth, done)
        raise TypeError(f"not a term: {e!r}")

    def _app(self, V, G, e, depth, done):
        vf, df = self.eval(V, G, e.fn, depth + 1)
        if not isinstance(vf, Closure):
            raise StuckError("StuckError: application of a non-closure value")
        # The pending list is normally a prefix of dom V. A closure that was
        # captured before bindings were spliced in below it (the V1 segment of
        # an enclosing application) lists only a subsequence.
        keep = _embedding(vf.pending, names_of(V))
        if keep is None:
            raise PrefixError(vf.pending, names_of(V))
        varg, da = self.eval(V, G, e.arg, depth + 1)
        clo = freshen_closure(vf, names_of(V))
        code = clo.code
        is_fix = isinstance(code, Fix)
        # Red-App runs the body under V, V1, V2; Red-App-Fix under V, V2 only.
        base_V = tuple(V[i] for i in keep) if is_fix else V
        base_G = None if G is None else (tuple(G[i] for i in keep) if is_fix else G)
        body_V = base_V + clo.env
        body_G = None
        if G is not None:
            body_G = base_G
            for c in clo.captured:
                cty = synthesize_type(c.value) if c.wtype is None else weaken_type(c.wtype, body_G)
                body_G = body_G + ((c.name, cty),)
        if is_fix:
            body_V = body_V + ((code.fname, clo),)
            if body_G is not None:
                fty = infer(body_G, code, weaken=True)[1]
                body_G = body_G + ((code.fname, fty),)
        body_V = body_V + ((code.param, varg),)
        pty = None
        if body_G is not None:
            pty = weaken_type(code.ptype, body_G)
            body_G = body_G + ((code.param, pty),)
        w, db = self.eval(body_V, body_G, code.body, depth + 1)
        if is_fix:
            return done("Red-App-Fix", w, (df, da, db))
        parg = None if G is None else infer(G, e.arg, weaken=True)[0]
        steps = [(code.param, varg, pty, parg)] + [
            (c.name, c.value, c.wtype, c.wdeps) for c in reversed(clo.captured)
        ]
        chain = []
        cur_G, cur_ty = body_G, None
        for name, val, wty, wdeps in steps:
            out, ds = subst_value(w, name, val, wty, wdeps)
            chain.append(ds)
            if self.self_check:
                outer = cur_G[:-1]
                rho = cur_G[-1][1]
                psi = _restrict(wdeps, outer)
                w_ty = infer(cur_G, code.body, weaken=True)[1] if cur_G is body_G else cur_ty
                cur_ty = self._check_preservation(outer, name, rho, psi, val, w, w_ty, out)
                cur_G = outer
            w = out
        return done("Red-App", w, (df, da, db, *chain))

    def _check_preservation(self, G, y, rho, psi, v, w, sigma, w_out):
        """Assert ``Γ ⊢ w' : τ`` where ``σ →[y\\Ψ] τ``; returns τ."""
        G1 = G + ((y, rho),)
        psi = _restrict(psi, G)
        _, tau, _ = subst_type(G1, y, psi, sigma)
        try:
            check_value(G, v, rho)
            check_value(G1, w, sigma)
        except CalculusError as exc:
            raise InvariantViolation(f"preservation hypothesis fails at {y}: {exc}")
        try:
            check_value(G, w_out, tau)
        except CalculusError as exc:
            raise InvariantViolation(f"value substitution of {y} broke typing: {exc}")
        self.preservation_checks += 1
        return tau


def _embedding(pending, names):
    """Positions of ``pending`` inside ``names`` as an in-order subsequence, or None."""
    out, j = [], 0
    for n in pending:
        while j < len(names) and names[j] != n:
            j += 1
        if j == len(names):
            return None
        out.append(j)
        j += 1
    return out


def _restrict(vec, ctx):
    table = dict(vec or ())
    return tuple((n, table.get(n, 0)) for n in names_of(ctx))


# ---------------------------------------------------------------- classic semantics


def eval_classic(W, e, *, max_steps=DEFAULT_MAX_STEPS):
    """``W ⊢ e ⇒c w``; returns ``(w, derivation)``."""
    _ensure_stack()
    budget = _Budget(max_steps)

    def ev(W, e, depth):
        budget.tick(depth)

        def done(rule, v, prem=()):
            return v, Derivation(rule, ReductionJ(W, e, v, classic=True), tuple(prem))

        if isinstance(e, Var):
            return done("Classic-Red-Var", _lookup(W, e.name))
        if isinstance(e, Lam):
            return done("Classic-Red-Lam", ClassicClosure(W, e))
        if isinstance(e, Fix):
            return done("Classic-Red-Lam-Fix", ClassicClosure(W, e))
        if isinstance(e, Pair):
            v1, d1 = ev(W, e.fst, depth + 1)
            v2, d2 = ev(W, e.snd, depth + 1)
            return done("Classic-Red-Pair", VPair(v1, v2), (d1, d2))
        if isinstance(e, Proj):
            v, d = ev(W, e.arg, depth + 1)
            if not isinstance(v, VPair):
                raise StuckError(f"StuckError: projection of a non-pair in pi{e.index}")
            return done("Classic-Red-Proj", v.fst if e.index == 1 else v.snd, (d,))
        if isinstance(e, Let):
            v1, d1 = ev(W, e.bound, depth + 1)
            v2, d2 = ev(W + ((e.name, v1),), e.body, depth + 1)
            return done("Classic-Red-Let", v2, (d1, d2))
        if isinstance(e, App):
            vf, df = ev(W, e.fn, depth + 1)
            if not isinstance(vf, ClassicClosure):
                raise StuckError("StuckError: application of a non-closure value")
            varg, da = ev(W, e.arg, depth + 1)
            code = vf.code
            if isinstance(code, Fix):
                env = vf.env + ((code.fname, vf), (code.param, varg))
                w, db = ev(env, code.body, depth + 1)
                return done("Classic-Red-App-Fix", w, (df, da, db))
            w, db = ev(vf.env + ((code.param, varg),), code.body, depth + 1)
            return done("Classic-Red-App", w, (df, da, db))
        raise TypeError(f"not a term: {e!r}")

    try:
        return ev(tuple(W), e, 0)
    except RecursionError:
        raise BudgetExceeded(max_steps)


def to_classic(v):
    """First-order open values are also classic values."""
    if isinstance(v, (AtomConst, VPair)):
        return v
    raise ValueError("only atoms and pairs are shared between the semantics")


# ---------------------------------------------------------------- equivalence


def values_equiv_semantics(V, v, W, w):
    """``V ⊢ v = W ⊢c w``.

    For closures the open side's environment is its pending prefix of ``V``
    followed by its captured bindings. The two codes must be alpha-equal up to
    a renaming of their free variables, and corresponding free variables must
    be bound to equivalent values. Comparing free variables only (rather than
    whole environments) is needed because the open side may carry extra
    pending names and renamed captures.
    """
    return _equiv(tuple(V), v, tuple(W), w)


def _split_env(env, name):
    for i in range(len(env) - 1, -1, -1):
        if env[i][0] == name:
            return env[:i], env[i][1]
    raise KeyError(name)


def _equiv(V, v, W, w):
    if isinstance(v, AtomConst) or isinstance(w, AtomConst):
        return v == w
    if isinstance(v, VPair) and isinstance(w, VPair):
        return _equiv(V, v.fst, W, w.fst) and _equiv(V, v.snd, W, w.snd)
    if not (isinstance(v, Closure) and isinstance(w, ClassicClosure)):
        return False
    if type(v.code) is not type(w.code):
        return False
    pending = set(v.pending)
    env_open = tuple(b for b in V if b[0] in pending) + v.env
    fo, fc = _code_free(v.code), _code_free(w.code)
    if len(fo) != len(fc):
        return False
    renamed = rename_all_term(v.code, {a: b for a, b in zip(fo, fc) if a != b})
    if not alpha_equal(renamed, w.code):
        return False
    for a, b in zip(fo, fc):
        try:
            Vp, va = _split_env(env_open, a)
            Wp, wb = _split_env(w.env, b)
        except KeyError:
            return False
        if not _equiv(Vp, va, Wp, wb):
            return False
    return True


def _code_free(code):
    return free_vars(code)


def env_equiv(V, W):
    """``V ⊢ = W ⊢c`` by position (same length, pointwise equivalent values)."""
    V, W = tuple(V), tuple(W)
    if len(V) != len(W):
        return False
    return all(_equiv(V[:i], v, W[:i], w) for i, ((_, v), (_, w)) in enumerate(zip(V, W)))


# ---------------------------------------------------------------- derivation validator


def check_reduction(d):
    """Check every node of a reduction derivation against its rule schema.

    Returns ``(True, None)`` or ``(False, message)``.
    """
    try:
        _check_red(d, ["root"])
    except _Bad as bad:
        return False, str(bad)
    return True, None


class _Bad(Exception):
    pass


def _need(cond, path, msg):
    if not cond:
        raise _Bad(f"{' > '.join(path)}: {msg}")


_OPEN = {Var: "Red-Var", Pair: "Red-Pair", Proj: "Red-Proj", Let: "Red-Let"}
_CLASSIC = {Var: "Classic-Red-Var", Pair: "Classic-Red-Pair", Proj: "Classic-Red-Proj", Let: "Classic-Red-Let"}


def _check_red(d, path):
    j = d.judgment
    _need(isinstance(j, ReductionJ), path, "not a reduction judgment")
    here = path + [d.rule]
    env, t, v, classic = j.env, j.term, j.value, j.classic
    prem = [p.judgment for p in d.premises if isinstance(p.judgment, ReductionJ)]
    for p in d.premises:
        if isinstance(p.judgment, ReductionJ):
            _check_red(p, here)

    def sub(i, term, penv):
        _need(len(prem) > i, here, f"missing premise {i + 1}")
        _need(prem[i].term == term, here, f"premise {i + 1} is about the wrong subterm")
        _need(prem[i].env == penv, here, f"premise {i + 1} has the wrong environment")
        return prem[i].value

    if isinstance(t, Var):
        _need(d.rule == ("Classic-Red-Var" if classic else "Red-Var"), here, "wrong rule")
        _need(_lookup(env, t.name) == v, here, "value differs from the environment")
    elif isinstance(t, (Lam, Fix)):
        lam = isinstance(t, Lam)
        if classic:
            _need(d.rule == ("Classic-Red-Lam" if lam else "Classic-Red-Lam-Fix"), here, "wrong rule")
            _need(v == ClassicClosure(env, t), here, "closure must capture the environment")
        else:
            _need(d.rule == ("Red-Lam" if lam else "Red-Lam-Fix"), here, "wrong rule")
            _need(v == Closure(names_of(env), (), t), here, "closure must capture nothing")
    elif isinstance(t, Pair):
        _need(d.rule == (_CLASSIC if classic else _OPEN)[Pair], here, "wrong rule")
        _need(v == VPair(sub(0, t.fst, env), sub(1, t.snd, env)), here, "pair of premise values expected")
    elif isinstance(t, Proj):
        _need(d.rule == (_CLASSIC if classic else _OPEN)[Proj], here, "wrong rule")
        p = sub(0, t.arg, env)
        _need(isinstance(p, VPair) and (p.fst if t.index == 1 else p.snd) == v, here, "wrong component")
    elif isinstance(t, Let):
        _need(d.rule == (_CLASSIC if classic else _OPEN)[Let], here, "wrong rule")
        v1 = sub(0, t.bound, env)
        v2 = sub(1, t.body, env + ((t.name, v1),))
        if classic:
            _need(v == v2, here, "result must be the body value")
        else:
            expect, _ = subst_value(v2, t.name, v1)
            _need(v == expect, here, "result must be the body value with the binding captured")
    elif isinstance(t, App):
        f = sub(0, t.fn, env)
        a = sub(1, t.arg, env)
        _need(len(prem) == 3, here, "application needs three reduction premises")
        body = prem[2]
        if classic:
            _need(isinstance(f, ClassicClosure), here, "function premise is not a closure")
            is_fix = isinstance(f.code, Fix)
            _need(d.rule == ("Classic-Red-App-Fix" if is_fix else "Classic-Red-App"), here, "wrong rule")
            extra = ((f.code.fname, f),) if is_fix else ()
            _need(body.env == f.env + extra + ((f.code.param, a),), here, "body environment is wrong")
            _need(body.term == f.code.body and body.value == v, here, "body premise mismatch")
        else:
            _need(isinstance(f, Closure), here, "function premise is not a closure")
            is_fix = isinstance(f.code, Fix)
            _need(d.rule == ("Red-App-Fix" if is_fix else "Red-App"), here, "wrong rule")
            keep = _embedding(f.pending, names_of(env))
            _need(keep is not None, here, "pending list is not embedded in the environment")
            clo = freshen_closure(f, names_of(env))
            base = tuple(env[i] for i in keep) if is_fix else env
            extra = ((clo.code.fname, clo),) if is_fix else ()
            _need(body.env == base + clo.env + extra + ((clo.code.param, a),), here, "body environment is wrong")
            _need(body.term == clo.code.body, here, "body premise runs the wrong code")
            if is_fix:
                _need(body.value == v, here, "fix application returns the body value")
            else:
                w = body.value
                w, _ = subst_value(w, clo.code.param, a)
                for c in reversed(clo.captured):
                    w, _ = subst_value(w, c.name, c.value)
                _need(w == v, here, "result is not the substituted body value")
    else:
        raise _Bad(f"{' > '.join(here)}: unknown term")
