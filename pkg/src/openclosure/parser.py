"""Lexer and recursive-descent parser for the concrete syntax.

Terms::

    t ::= let x = t in t | \\(x:T) t | λ(x:T) t | fix f(x:T):T = t | app
    app ::= item+                        (left-associative application)
    item ::= pi1 item | pi2 item | x | (t) | (t, t) | λ... | let... | fix...

Types::

    T ::= A * T | A                      (right-associative product)
    A ::= ident | (T) | [x1:T^d, ...](x:T^d) -> T

Annotations ``^0``/``^1`` (or ``⁰``/``¹``) may be omitted and then mean 0.
A lambda, let or fix as an application argument extends to the end.

After parsing, binders are renamed apart so that every bound name is
distinct from every other name in the program (shadowing is resolved here).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError
from .runtime import AtomConst
from .syntax import App, Atom, Clos, Fix, Lam, Let, Pair, Prod, Proj, Var, fresh, free_vars

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<arrow>->|→)
  | (?P<mapsto>\|->|↦)
  | (?P<sup>[⁰¹])
  | (?P<proj>(?:pi|π)[12](?![\w']))
  | (?P<ident>[^\W\d⁰¹](?:[^\W⁰¹]|')*)
  | (?P<num>\d+)
  | (?P<sym>[()\[\],:=*^\\λ.])
    """,
    re.VERBOSE,
)

KEYWORDS = {"let", "in", "fix"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(src):
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m:
            raise ParseError(f"SyntaxError: unexpected character {src[pos]!r}", line, col)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "ident" and text in ("λ",):
                kind = "sym"
            elif kind == "ident" and text in KEYWORDS:
                kind = text
            tokens.append(Token(kind, text, line, col))
        for ch in text:
            if ch == "\n":
                line, col = line + 1, 1
            else:
                col += 1
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, src):
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, what, tok=None):
        tok = tok or self.tok
        shown = tok.text or "end of input"
        raise ParseError(f"SyntaxError: expected {what}, found {shown!r}", tok.line, tok.column)

    def at(self, kind, text=None):
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_sym(self, text):
        return self.at("sym", text)

    def eat(self, kind, text=None, what=None):
        if not self.at(kind, text):
            self.error(what or repr(text or kind))
        t = self.tok
        self.i += 1
        return t

    def sym(self, text):
        return self.eat("sym", text)

    def ident(self):
        return self.eat("ident", what="an identifier").text

    # ------------------------------------------------------------ terms

    def term(self):
        if self.at("let"):
            self.i += 1
            name = self.ident()
            self.sym("=")
            bound = self.term()
            self.eat("in", what="'in'")
            return Let(name, bound, self.term())
        if self.at_sym("\\") or self.at_sym("λ"):
            self.i += 1
            self.sym("(")
            name = self.ident()
            self.sym(":")
            ty = self.type()
            self.sym(")")
            if self.at_sym("."):
                self.i += 1
            return Lam(name, ty, self.term())
        if self.at("fix"):
            self.i += 1
            fname = self.ident()
            self.sym("(")
            param = self.ident()
            self.sym(":")
            ptype = self.type()
            self.sym(")")
            self.sym(":")
            rtype = self.type()
            self.sym("=")
            return Fix(fname, param, ptype, rtype, self.term())
        return self.app()

    def _starts_item(self):
        t = self.tok
        return t.kind in ("ident", "proj") or (t.kind == "sym" and t.text == "(")

    def _starts_binder(self):
        return self.at("let") or self.at("fix") or self.at_sym("\\") or self.at_sym("λ")

    def app(self):
        if not self._starts_item():
            self.error("a term")
        head = self.item()
        while self._starts_item() or self._starts_binder():
            if self._starts_binder():
                return App(head, self.term())
            head = App(head, self.item())
        return head

    def item(self):
        t = self.tok
        if t.kind == "proj":
            self.i += 1
            if self._starts_binder():
                return Proj(int(t.text[-1]), self.term())
            return Proj(int(t.text[-1]), self.item())
        if t.kind == "ident":
            self.i += 1
            return Var(t.text)
        if self.at_sym("("):
            self.i += 1
            first = self.term()
            if self.at_sym(","):
                self.i += 1
                second = self.term()
                self.sym(")")
                return Pair(first, second)
            self.sym(")")
            return first
        self.error("a term")

    # ------------------------------------------------------------ types

    def type(self):
        left = self.type_atom()
        if self.at_sym("*"):
            self.i += 1
            return Prod(left, self.type())
        return left

    def type_atom(self):
        if self.at("ident"):
            return Atom(self.ident())
        if self.at_sym("("):
            self.i += 1
            ty = self.type()
            self.sym(")")
            return ty
        if self.at_sym("["):
            self.i += 1
            entries = []
            if not self.at_sym("]"):
                entries.append(self.entry())
                while self.at_sym(","):
                    self.i += 1
                    entries.append(self.entry())
            self.sym("]")
            self.sym("(")
            param, ptype, pdep = self.entry()
            self.sym(")")
            self.eat("arrow", what="'->'")
            return Clos(tuple(entries), param, pdep, ptype, self.type())
        self.error("a type")

    def entry(self):
        name = self.ident()
        self.sym(":")
        ty = self.type()
        return name, ty, self.dep()

    def dep(self):
        if self.at("sup"):
            return {"⁰": 0, "¹": 1}[self.eat("sup").text]
        if self.at_sym("^"):
            self.i += 1
            t = self.eat("num", what="an annotation 0 or 1")
            if t.text not in ("0", "1"):
                self.error("an annotation 0 or 1", t)
            return int(t.text)
        return 0

    def end(self):
        if not self.at("eof"):
            self.error("end of input")


def parse_term(src, rename=True):
    p = _Parser(src)
    t = p.term()
    p.end()
    return rename_apart(t) if rename else t


def parse_type(src):
    p = _Parser(src)
    ty = p.type()
    p.end()
    return ty


def parse_context(src):
    """``x1:T1, x2:T2, ...`` (annotations, if present, are ignored)."""
    p = _Parser(src)
    out = []
    if not p.at("eof"):
        while True:
            name, ty, _ = p.entry()
            out.append((name, ty))
            if not p.at_sym(","):
                break
            p.i += 1
    p.end()
    return tuple(out)


# ---------------------------------------------------------------- renaming apart


def rename_apart(term, reserved=()):
    """Give every binder a name used nowhere else; free names are kept."""
    used = set(reserved) | set(free_vars(term))

    def bind(name):
        new = fresh(name, used)
        used.add(new)
        return new

    def ty(t, env):
        if isinstance(t, Atom):
            return t
        if isinstance(t, Prod):
            return Prod(ty(t.left, env), ty(t.right, env))
        ctx = tuple((env.get(n, n), ty(s, env), d) for n, s, d in t.ctx)
        return Clos(ctx, t.param, t.pdep, ty(t.ptype, env), ty(t.result, env))

    def go(t, env):
        if isinstance(t, Var):
            return Var(env.get(t.name, t.name))
        if isinstance(t, Pair):
            return Pair(go(t.fst, env), go(t.snd, env))
        if isinstance(t, Proj):
            return Proj(t.index, go(t.arg, env))
        if isinstance(t, App):
            return App(go(t.fn, env), go(t.arg, env))
        if isinstance(t, Lam):
            ptype = ty(t.ptype, env)
            x = bind(t.param)
            return Lam(x, ptype, go(t.body, {**env, t.param: x}))
        if isinstance(t, Fix):
            ptype = ty(t.ptype, env)
            f = bind(t.fname)
            x = bind(t.param)
            inner = {**env, t.fname: f, t.param: x}
            return Fix(f, x, ptype, ty(t.rtype, {**env, t.param: x}), go(t.body, inner))
        if isinstance(t, Let):
            bound = go(t.bound, env)
            x = bind(t.name)
            return Let(x, bound, go(t.body, {**env, t.name: x}))
        raise TypeError(t)

    return go(term, {})


# ---------------------------------------------------------------- programs


@dataclass
class SourceProgram:
    text: str
    term: object
    context: tuple = ()
    valuation: tuple = ()
    auto_bound: list = field(default_factory=list)


def default_value(name, ty):
    """The dummy constant for a variable of first-order type."""
    if isinstance(ty, Atom):
        return AtomConst(ty.name, f"val_{name}")
    if isinstance(ty, Prod):
        from .runtime import VPair

        return VPair(default_value(name + "_1", ty.left), default_value(name + "_2", ty.right))
    raise ParseError(f"no default value for {name}, whose type is a closure type", 0, 0)


def parse(src, context=None, strict=False):
    """Parse a program; unbound variables get ``ty_x`` / ``val_x`` unless ``strict``."""
    from .errors import UnboundVariable

    ctx = tuple(context or ())
    term = parse_term(src, rename=False)
    term = rename_apart(term, reserved=[n for n, _ in ctx])
    missing = [x for x in free_vars(term) if x not in {n for n, _ in ctx}]
    if missing and strict:
        raise UnboundVariable(missing[0])
    ctx = ctx + tuple((x, Atom(f"ty_{x}")) for x in missing)
    valuation = tuple((n, default_value(n, t)) for n, t in ctx)
    return SourceProgram(src, term, ctx, valuation, missing)
