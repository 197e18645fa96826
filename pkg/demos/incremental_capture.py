"""Incremental capture next to ordinary environment capture.

Closures built by the open semantics capture nothing when created. Each
binder they escape from adds one binding to them, innermost first.
"""
from openclosure import AtomConst, eval_classic, eval_open, parse_context, parse_term, print_value
from openclosure.runtime import check_value
from openclosure.infer import infer_type

ctx = parse_context("secret:a, public:b")
env = (("secret", AtomConst("a", "s0")), ("public", AtomConst("b", "p0")))

programs = [
    r"\(z:b) z",
    r"let y = public in \(z:b) y",
    r"let y = secret in let w = public in \(z:b) (y, w)",
    r"let f = let k = public in \(x:a) \(z:b) (x, k) in f secret",
]

for src in programs:
    term = parse_term(src)
    ty = infer_type(ctx, term)
    v, _ = eval_open(env, term, ctx)
    w, _ = eval_classic(env, term)
    check_value(ctx, v, ty)
    print(src)
    print("  open:    ", print_value(v))
    print("  classic: ", print_value(w))
    print()

print("In the open values the pending list names the outer variables that")
print("remain references; the captured list holds what left scope, latest first.")
