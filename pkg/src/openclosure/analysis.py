"""Non-interference, value equivalence, a dependency oracle and generators.

Everything here works by exhaustive enumeration over small finite atom
domains: each atom type gets a fixed list of constants.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

from .errors import CalculusError, CombinatorialLimit, GenerationExhausted, WitnessNotFound
from .evaluate import eval_classic, eval_open
from .infer import infer
from .printer import print_term, print_type, print_valuation, print_value, print_vector
from .runtime import AtomConst, Closure, VPair, captured_types, check_value, strengthen_for
from .syntax import (
    App,
    Atom,
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
    dep_get,
    dep_leq,
    names_of,
    type_atoms,
)

DEFAULT_PAIR_CAP = 10**5


# ---------------------------------------------------------------- domains


class AtomDomain:
    """Finite constant sets per atom type; unknown atoms get the default size."""

    def __init__(self, constants=None, default_size=2):
        self.constants = {k: list(v) for k, v in (constants or {}).items()}
        self.default_size = default_size
        for atom, consts in self.constants.items():
            if not consts or len(set(consts)) != len(consts):
                raise ValueError(f"atom {atom} needs distinct constants")

    def of(self, atom):
        if atom not in self.constants:
            self.constants[atom] = [f"{atom}_{i}" for i in range(self.default_size)]
        return self.constants[atom]

    def values(self, ty):
        """Every value of a first-order type."""
        if isinstance(ty, Atom):
            return [AtomConst(ty.name, c) for c in self.of(ty.name)]
        if isinstance(ty, Prod):
            return [VPair(a, b) for a in self.values(ty.left) for b in self.values(ty.right)]
        raise CombinatorialLimit(f"CombinatorialLimit: cannot enumerate values of closure type {print_type(ty)}")

    def count(self, ty):
        if isinstance(ty, Atom):
            return len(self.of(ty.name))
        if isinstance(ty, Prod):
            return self.count(ty.left) * self.count(ty.right)
        raise CombinatorialLimit(f"CombinatorialLimit: cannot enumerate values of closure type {print_type(ty)}")


def default_domain():
    return AtomDomain()


def valuations(ctx, domains, cap=DEFAULT_PAIR_CAP):
    ctx = tuple(ctx)
    total = 1
    for _, ty in ctx:
        total *= domains.count(ty)
    if total > cap:
        raise CombinatorialLimit(f"CombinatorialLimit: {total} valuations exceed the cap of {cap}")
    names = names_of(ctx)
    for combo in itertools.product(*(domains.values(ty) for _, ty in ctx)):
        yield tuple(zip(names, combo))


# ---------------------------------------------------------------- value equivalence


def value_equiv(ctx, v, w, ty, phi0):
    """``Γ ⊢ v =Φ0 w : σ``.

    Captured values of closures are compared only when their definition's
    dependency vector ``Ψ_i`` is included in ``Φ0``; vectors over different
    telescopes are compared by name, missing names counting as 0.
    """
    ctx = tuple(ctx)
    if isinstance(ty, Atom):
        return isinstance(v, AtomConst) and v == w
    if isinstance(ty, Prod):
        if not (isinstance(v, VPair) and isinstance(w, VPair)):
            return False
        return value_equiv(ctx, v.fst, w.fst, ty.left, phi0) and value_equiv(ctx, v.snd, w.snd, ty.right, phi0)
    for side in (v, w):
        try:
            check_value(ctx, side, ty)
        except CalculusError as exc:
            raise WitnessNotFound(f"WitnessNotFound: {exc}")
    if not (isinstance(v, Closure) and isinstance(w, Closure)):
        return False
    if v.pending != w.pending or not alpha_equal(v.code, w.code):
        return False
    if ty.names != v.pending:
        reduced = strengthen_for(ctx, v, ty)
        if reduced is None:
            raise WitnessNotFound("WitnessNotFound: pending list does not embed in the type's context")
        ctx, ty = reduced
    if [c.name for c in v.captured] != [c.name for c in w.captured]:
        return False
    gamma = ctx[: len(v.pending)]
    types, _ = captured_types(gamma, v)
    inner = gamma
    for c, c2, cty in zip(v.captured, w.captured, types):
        psi = c.wdeps if c.wdeps is not None else tuple((n, 1) for n in names_of(inner))
        if dep_leq(psi, phi0) and not value_equiv(inner, c.value, c2.value, cty, phi0):
            return False
        inner = inner + ((c.name, cty),)
    return True


def phi_equiv_valuations(V, W, phi0, ctx=None):
    """``V =Φ0 W``: agreement on every variable marked 1 in ``Φ0``."""
    V, W = tuple(V), tuple(W)
    if names_of(V) != names_of(W):
        return False
    for i, ((n, a), (_, b)) in enumerate(zip(V, W)):
        if not dep_get(phi0, n):
            continue
        if ctx is None:
            if a != b:
                return False
        elif not value_equiv(ctx[:i], a, b, ctx[i][1], phi0):
            return False
    return True


# ---------------------------------------------------------------- non-interference


@dataclass
class NonInterferenceReport:
    term: object
    context: tuple
    phi: tuple
    result_type: object
    pairs_tested: int = 0
    violations: list = field(default_factory=list)  # (V, V', v, v')

    @property
    def ok(self):
        return not self.violations

    def sort(self):
        self.violations.sort(key=lambda r: (print_valuation(r[0], True), print_valuation(r[1], True)))

    def to_text(self, ascii=True):
        lines = [
            f"term: {print_term(self.term, ascii)}",
            f"inferred: {print_vector(self.phi)}",
            f"type: {print_type(self.result_type, ascii)}",
            f"pairs tested: {self.pairs_tested}",
            f"violations: {len(self.violations)}",
        ]
        for V, W, v, w in self.violations:
            lines.append(
                f"  V = [{print_valuation(V, ascii)}] gives {print_value(v, ascii)}; "
                f"V' = [{print_valuation(W, ascii)}] gives {print_value(w, ascii)}"
            )
        return "\n".join(lines)

    def to_records(self):
        for V, W, v, w in self.violations:
            yield {
                "term": print_term(self.term, True),
                "phi": dict(self.phi),
                "left_valuation": {n: print_value(x, True) for n, x in V},
                "right_valuation": {n: print_value(x, True) for n, x in W},
                "left_value": print_value(v, True),
                "right_value": print_value(w, True),
            }

    def to_jsonl(self):
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.to_records())


def check_noninterference(ctx, e, domains=None, *, cap=DEFAULT_PAIR_CAP, max_steps=10**5):
    """Evaluate ``e`` under every ``Φ0``-equivalent pair of valuations."""
    ctx = tuple(ctx)
    domains = domains or default_domain()
    phi0, ty, _ = infer(ctx, e)
    report = NonInterferenceReport(e, ctx, phi0, ty)
    vals = list(valuations(ctx, domains, cap))
    # Valuations agreeing on the needed variables form classes; pairs are
    # drawn within each class.
    needed = [i for i, (n, _) in enumerate(ctx) if dep_get(phi0, n)]
    classes = {}
    for V in vals:
        classes.setdefault(tuple(V[i][1] for i in needed), []).append(V)
    total = sum(len(c) ** 2 for c in classes.values())
    if total > cap:
        raise CombinatorialLimit(f"CombinatorialLimit: {total} valuation pairs exceed the cap of {cap}")
    results = {}

    def run(V):
        if V not in results:
            results[V] = eval_open(V, e, ctx, max_steps=max_steps)[0]
        return results[V]

    for cls in classes.values():
        for V, W in itertools.product(cls, cls):
            if not phi_equiv_valuations(V, W, phi0, ctx):
                continue
            report.pairs_tested += 1
            v, w = run(V), run(W)
            same = value_equiv(ctx, v, w, ty, phi0)
            if isinstance(ty, Atom):
                same = same and v == w
            if not same:
                report.violations.append((V, W, v, w))
    report.sort()
    return report


def semantic_deps_oracle(ctx, e, domains=None, *, cap=DEFAULT_PAIR_CAP, max_steps=10**5):
    """Variables whose value alone can change the (atomic) classic result."""
    ctx = tuple(ctx)
    domains = domains or default_domain()
    _, ty, _ = infer(ctx, e)
    if not isinstance(ty, Atom):
        raise ValueError("the dependency oracle observes atomic results only")
    results = {}

    def run(V):
        if V not in results:
            results[V] = eval_classic(V, e, max_steps=max_steps)[0]
        return results[V]

    deps = set()
    for V in valuations(ctx, domains, cap):
        for i, (n, ty_i) in enumerate(ctx):
            if n in deps:
                continue
            for alt in domains.values(ty_i):
                if alt == V[i][1]:
                    continue
                W = V[:i] + ((n, alt),) + V[i + 1 :]
                if run(V) != run(W):
                    deps.add(n)
                    break
    return deps


# ---------------------------------------------------------------- generators


class _Gen:
    """Typing-rule-directed generation of well-typed terms."""

    def __init__(self, rng, allow_fix=False, atoms=("a", "b")):
        self.rng = rng
        self.allow_fix = allow_fix
        self.atoms = list(atoms)
        self.counter = itertools.count()

    def fresh(self, base):
        return f"{base}{next(self.counter)}"

    def type_of(self, ctx, t):
        return infer(ctx, t)[1]

    def pick_type(self, ctx):
        """A parameter type for which arguments are easy to build."""
        pool = [ty for _, ty in ctx if not isinstance(ty, Clos)] + [Atom(a) for a in self.atoms]
        if ctx and self.rng.random() < 0.2:
            closures = [ty for _, ty in ctx if isinstance(ty, Clos)]
            if closures:
                return self.rng.choice(closures)
        return self.rng.choice(pool)

    def term(self, ctx, depth):
        """Any well-typed term in ``ctx``."""
        r = self.rng
        if depth <= 1:
            if ctx and r.random() < 0.8:
                return Var(r.choice(names_of(ctx)))
            x = self.fresh("p")
            return Lam(x, Atom(r.choice(self.atoms)), Var(x if not ctx or r.random() < 0.5 else r.choice(names_of(ctx))))
        else:
            weights = {"var": 1, "pair": 2, "proj": 2, "lam": 3, "let": 4, "app": 4, "fix": 1 if self.allow_fix else 0}
            kinds = [k for k, w in weights.items() for _ in range(w)]
            kind = r.choice(kinds)
        if kind == "var" and ctx:
            return Var(r.choice(names_of(ctx)))
        if kind == "pair" and ctx:
            return Pair(self.term(ctx, depth - 1), self.term(ctx, depth - 1))
        if kind == "proj":
            inner = self.term(ctx, depth - 1)
            if isinstance(self.type_of(ctx, inner), Prod):
                return Proj(r.choice((1, 2)), inner)
            return Proj(r.choice((1, 2)), Pair(inner, self.term(ctx, depth - 1)))
        if kind == "let":
            x = self.fresh("x")
            bound = self.term(ctx, depth - 1)
            s = self.type_of(ctx, bound)
            return Let(x, bound, self.term(ctx + ((x, s),), depth - 1))
        if kind == "app":
            t = self.app(ctx, depth)
            if t is not None:
                return t
        if kind == "fix":
            t = self.fix(ctx, depth)
            if t is not None:
                return t
        x = self.fresh("p")
        ty = self.pick_type(ctx)
        return Lam(x, ty, self.term(ctx + ((x, ty),), depth - 1))

    def of_type(self, ctx, ty, depth):
        """A term of exactly ``ty`` (up to alpha), or None."""
        r = self.rng
        names = [n for n, t in ctx if alpha_equal(t, ty)]
        options = []
        if names:
            options.append("var")
        if isinstance(ty, Prod):
            options.append("pair")
        if depth > 1:
            options += ["let", "proj"]
        if not options:
            return None
        kind = r.choice(options)
        if kind == "let":
            x = self.fresh("x")
            bound = self.term(ctx, depth - 1)
            s = self.type_of(ctx, bound)
            body = self.of_type(ctx + ((x, s),), ty, depth - 1)
            return None if body is None else Let(x, bound, body)
        if kind == "proj":
            inner = self.of_type(ctx, ty, depth - 1)
            if inner is None:
                return None
            other = self.term(ctx, max(depth - 2, 1))
            return Proj(1, Pair(inner, other)) if r.random() < 0.5 else Proj(2, Pair(other, inner))
        if kind == "pair":
            a = self.of_type(ctx, ty.left, depth - 1)
            b = self.of_type(ctx, ty.right, depth - 1)
            if a is None or b is None:
                return None
            return Pair(a, b)
        return Var(r.choice(names))

    def app(self, ctx, depth):
        r = self.rng
        funs = [n for n, t in ctx if isinstance(t, Clos)]
        if funs and r.random() < 0.6:
            f = r.choice(funs)
            fty = dict(ctx)[f]
            arg = self.of_type(ctx, fty.ptype, depth - 1)
            if arg is not None:
                return App(Var(f), arg)
        ty = self.pick_type(ctx)
        arg = self.of_type(ctx, ty, depth - 1)
        if arg is None:
            return None
        x = self.fresh("p")
        return App(Lam(x, ty, self.term(ctx + ((x, ty),), depth - 1)), arg)

    def fix(self, ctx, depth):
        atoms = [t for _, t in ctx if isinstance(t, Atom)]
        if not atoms:
            return None
        ty = self.rng.choice(atoms)
        f, x = self.fresh("f"), self.fresh("p")
        inner = ctx + ((f, Clos(annotate(ctx, tuple((n, 0) for n in names_of(ctx))), x, 0, ty, ty)), (x, ty))
        body = self.of_type(inner, ty, max(depth - 1, 1))
        if body is None:
            body = Var(x)
        return Fix(f, x, ty, ty, body)


def gen_typed_term(ctx, ty=None, depth=4, seed=0, *, allow_fix=False, retries=50, atoms=None):
    """A term well-typed in ``ctx`` (of type ``ty`` when given), drawn from ``seed``."""
    ctx = tuple(ctx)
    rng = random.Random(seed)
    atoms = atoms or sorted({a for _, t in ctx for a in type_atoms(t)} or {"a"})
    gen = _Gen(rng, allow_fix, atoms)
    for _ in range(retries):
        try:
            t = gen.term(ctx, depth) if ty is None else gen.of_type(ctx, ty, depth)
            if t is None:
                continue
            _, got, _ = infer(ctx, t)
            if ty is None or alpha_equal(got, ty):
                return t
        except CalculusError:
            continue
    raise GenerationExhausted(f"GenerationExhausted: no term after {retries} attempts (seed {seed})")


def gen_context(rng, size=None, atoms=("a", "b")):
    """A context of first-order types (atoms and products of atoms)."""
    size = rng.randint(1, 3) if size is None else size
    out = []
    for i in range(size):
        ty = Atom(rng.choice(atoms))
        if rng.random() < 0.2:
            ty = Prod(ty, Atom(rng.choice(atoms)))
        out.append((f"v{i}", ty))
    return tuple(out)


def gen_scoped_type(rng, ctx, depth=2, atoms=("a", "b")):
    """A random type well scoped in ``ctx``; closure types capture a prefix."""
    if depth <= 0 or rng.random() < 0.3:
        return Atom(rng.choice(atoms))
    if rng.random() < 0.35:
        return Prod(gen_scoped_type(rng, ctx, depth - 1, atoms), gen_scoped_type(rng, ctx, depth - 1, atoms))
    k = rng.randint(0, len(ctx))
    prefix = ctx[:k]
    param = f"q{rng.randrange(10**6)}"
    while param in names_of(ctx):
        param = f"q{rng.randrange(10**6)}"
    ptype = gen_scoped_type(rng, prefix, depth - 1, atoms) if rng.random() < 0.3 else Atom(rng.choice(atoms))
    result = gen_scoped_type(rng, prefix + ((param, ptype),), depth - 1, atoms)
    deps = tuple((n, t, rng.randint(0, 1)) for n, t in prefix)
    return Clos(deps, param, rng.randint(0, 1), ptype, result)


def gen_scoped_context(rng, size, depth=2, atoms=("a", "b")):
    ctx = ()
    for i in range(size):
        ctx = ctx + ((f"c{i}", gen_scoped_type(rng, ctx, depth, atoms)),)
    return ctx


def gen_confluence_instance(rng, size=5, depth=2):
    """A well-scoped annotated context, a type, two variables and their vectors.

    Returns ``(actx, tau, xa, psi_a, xb, psi_b)`` with ``xa`` before ``xb``;
    ``psi_a`` covers the prefix before ``xa`` and ``psi_b`` the prefix before
    ``xb``.
    """
    ctx = gen_scoped_context(rng, size, depth)
    tau = gen_scoped_type(rng, ctx, depth + 1)
    ia, ib = sorted(rng.sample(range(size), 2))
    names = names_of(ctx)
    actx = tuple((n, t, rng.randint(0, 1)) for n, t in ctx)
    psi_a = tuple((n, rng.randint(0, 1)) for n in names[:ia])
    psi_b = tuple((n, rng.randint(0, 1)) for n in names[:ib])
    return actx, tau, names[ia], psi_a, names[ib], psi_b


