"""Pretty-printing of types, terms, values, judgments and derivations.

Two renderings exist. Unicode uses superscript annotations, ``λ``, ``→``,
``⊢`` and ``↦``; ASCII uses ``^0``, ``\\``, ``->``, ``|-`` and ``|->``. The
parser accepts both.
"""
from __future__ import annotations

from .derivation import ReductionJ, ScopeJ, SubstJ, TypingJ, ValueSubstJ, ValueTypingJ
from .syntax import App, Atom, Clos, Fix, Lam, Let, Pair, Prod, Proj, Var

_SYM = {
    False: {"lam": "λ", "arrow": "→", "vdash": "⊢", "mapsto": "↦", "red": "⇒", "pi": "π"},
    True: {"lam": "\\", "arrow": "->", "vdash": "|-", "mapsto": "|->", "red": "=>", "pi": "pi"},
}
_SUP = {0: "⁰", 1: "¹"}


def print_dep(d, ascii=False):
    return f"^{d}" if ascii else _SUP[d]


# ---------------------------------------------------------------- types


def print_type(ty, ascii=False):
    if isinstance(ty, Atom):
        return ty.name
    if isinstance(ty, Prod):
        left = print_type(ty.left, ascii)
        if isinstance(ty.left, (Prod, Clos)):
            left = f"({left})"
        return f"{left} * {print_type(ty.right, ascii)}"
    ctx = print_annotated_context(ty.ctx, ascii)
    s = _SYM[ascii]
    param = f"{ty.param}:{_entry_type(ty.ptype, ascii)}{print_dep(ty.pdep, ascii)}"
    return f"[{ctx}]({param}) {s['arrow']} {print_type(ty.result, ascii)}"


def _entry_type(t, ascii):
    # A compound type followed by an annotation is parenthesized.
    s = print_type(t, ascii)
    return s if isinstance(t, Atom) else f"({s})"


def print_annotated_context(actx, ascii=False):
    return ",".join(f"{n}:{_entry_type(t, ascii)}{print_dep(d, ascii)}" for n, t, d in actx)


def print_context(ctx, ascii=False):
    return ",".join(f"{n}:{print_type(t, ascii)}" for n, t in ctx)


def print_vector(vec):
    return "{" + ", ".join(f"{n}:{d}" for n, d in vec) + "}"


# ---------------------------------------------------------------- terms


def print_term(t, ascii=False):
    s = _SYM[ascii]
    if isinstance(t, Let):
        return f"let {t.name} = {print_term(t.bound, ascii)} in {print_term(t.body, ascii)}"
    if isinstance(t, Lam):
        return f"{s['lam']}({t.param}:{print_type(t.ptype, ascii)}) {print_term(t.body, ascii)}"
    if isinstance(t, Fix):
        return (
            f"fix {t.fname}({t.param}:{print_type(t.ptype, ascii)}):"
            f"{print_type(t.rtype, ascii)} = {print_term(t.body, ascii)}"
        )
    return _app(t, ascii)


def _app(t, ascii):
    if isinstance(t, App):
        return f"{_app(t.fn, ascii)} {_atom(t.arg, ascii)}"
    if isinstance(t, Proj):
        return f"{_SYM[ascii]['pi']}{t.index} {_atom(t.arg, ascii)}"
    return _atom(t, ascii)


def _atom(t, ascii):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Pair):
        return f"({print_term(t.fst, ascii)}, {print_term(t.snd, ascii)})"
    return f"({print_term(t, ascii)})"


# ---------------------------------------------------------------- values


def print_value(v, ascii=False):
    from .runtime import AtomConst, ClassicClosure, Closure, VPair

    s = _SYM[ascii]
    if isinstance(v, AtomConst):
        return v.name
    if isinstance(v, VPair):
        return f"({print_value(v.fst, ascii)}, {print_value(v.snd, ascii)})"
    if isinstance(v, Closure):
        pending = "[" + ",".join(v.pending) + "]"
        caps = ", ".join(f"({c.name} {s['mapsto']} {print_value(c.value, ascii)})" for c in v.captured)
        return f"({pending}, ({caps}), {_print_code(v.code, ascii)})"
    if isinstance(v, ClassicClosure):
        env = ", ".join(f"{n} {s['mapsto']} {print_value(w, ascii)}" for n, w in v.env)
        return f"([{env}], {_print_code(v.code, ascii)})"
    return repr(v)


def _print_code(code, ascii):
    s = _SYM[ascii]
    if isinstance(code, Fix):
        return f"fix {code.fname}({code.param}) {print_term(code.body, ascii)}"
    return f"{s['lam']}({code.param}) {print_term(code.body, ascii)}"


def print_valuation(V, ascii=False):
    s = _SYM[ascii]
    return ", ".join(f"{n} {s['mapsto']} {print_value(v, ascii)}" for n, v in V)


# ---------------------------------------------------------------- judgments


def print_judgment(j, ascii=False):
    s = _SYM[ascii]
    vd = s["vdash"]
    if isinstance(j, ScopeJ):
        ctx = print_context(j.ctx, ascii)
        if j.ty is None:
            return f"{ctx} {vd}".strip()
        return f"{ctx} {vd} {print_type(j.ty, ascii)}".strip()
    if isinstance(j, SubstJ):
        arrow = f"{s['arrow']}[{j.var}\\{print_vector(j.psi)}]"
        left = print_context(j.ctx, ascii)
        right = print_context(j.out_ctx, ascii)
        if j.ty is None:
            return f"{left} {vd} {arrow} {right} {vd}"
        return f"{left} {vd} {print_type(j.ty, ascii)} {arrow} {right} {vd} {print_type(j.out_ty, ascii)}"
    if isinstance(j, TypingJ):
        ctx = print_annotated_context(j.actx, ascii)
        return f"{ctx} {vd} {print_term(j.term, ascii)} : {print_type(j.ty, ascii)}".strip()
    if isinstance(j, ValueTypingJ):
        ctx = print_context(j.ctx, ascii)
        return f"{ctx} {vd} {print_value(j.value, ascii)} : {print_type(j.ty, ascii)}".strip()
    if isinstance(j, ValueSubstJ):
        return (
            f"{print_value(j.value, ascii)} {s['arrow']}[{j.var}\\{print_value(j.arg, ascii)}] "
            f"{print_value(j.result, ascii)}"
        )
    if isinstance(j, ReductionJ):
        red = s["red"] + ("c" if j.classic else "")
        return f"{print_valuation(j.env, ascii)} {vd} {print_term(j.term, ascii)} {red} {print_value(j.value, ascii)}".strip()
    return repr(j)


def render_derivation(d, ascii=False, indent="  "):
    """One ``Rule: judgment`` line per node; indentation encodes nesting."""
    lines = []

    def go(node, depth):
        lines.append(f"{indent * depth}{node.rule}: {print_judgment(node.judgment, ascii)}")
        for p in node.premises:
            go(p, depth + 1)

    go(d, 0)
    return "\n".join(lines)
