"""Walk through a whole session: parse, infer, evaluate, show derivations.

Run with ``python3 demos/session.py``.
"""
from openclosure import eval_open, infer, parse, print_annotated_context, print_type, print_value
from openclosure.printer import render_derivation
from openclosure.syntax import annotate

SOURCE = r"let y = (y1, y2) in (y, \(x:s) z)"

prog = parse(SOURCE)
print("source:        ", SOURCE)
print("auto-bound:    ", ", ".join(prog.auto_bound))

# The annotation says which free variables the *value* needs right now.
# z is marked 0 even though the closure mentions it: the closure's own type
# records that calling it will need z.
phi, ty, tderiv = infer(prog.context, prog.term)
print("context:       ", print_annotated_context(annotate(prog.context, phi)))
print("type:          ", print_type(ty))

value, rderiv = eval_open(prog.valuation, prog.term, prog.context)
print("value:         ", print_value(value))
print()
print("The closure has captured the local y but still lists y1, y2 and z as")
print("pending: they belong to the outer context and are never copied.")
print()
print("typing derivation (top three levels):")
for line in render_derivation(tderiv).splitlines():
    if len(line) - len(line.lstrip()) <= 4:
        print("  " + line)
print()
print("reduction derivation:")
for line in render_derivation(rderiv).splitlines():
    print("  " + line)
