"""Dependency annotations as an information-flow analysis.

A variable annotated 0 cannot influence the result. The check enumerates
every pair of valuations that agree on the variables annotated 1 and
compares the results.
"""
from openclosure import (
    Atom,
    AtomDomain,
    EscapeError,
    check_noninterference,
    infer,
    parse_context,
    parse_term,
    semantic_deps_oracle,
)

domains = AtomDomain({"bool": ["tt", "ff"]})
ctx = parse_context("high:bool, low:bool")

for src in [
    "low",
    r"let y = high in \(z:bool) low",
    r"let y = high in \(z:bool) y",
    "let w = (high, low) in pi2 w",
]:
    term = parse_term(src)
    report = check_noninterference(ctx, term, domains)
    needed = [n for n, d in report.phi if d]
    line = f"{src:40} needs {needed!s:18} violations {len(report.violations)}"
    if isinstance(report.result_type, Atom):
        line += f"   observed deps {sorted(semantic_deps_oracle(ctx, term, domains))}"
    print(line)

print()
print("The projection example is an over-approximation: the analysis marks")
print("high as needed because the pair as a whole was bound, while no run")
print("can observe it.")
print()

# A closure type may not be passed a function that depends on a variable
# about to leave scope: the argument type would have to change.
escape = parse_term(
    "let x = c in let y = c in "
    r"let f = \(g:[c:int^0,u:unit^0,x:int^1](z:unit^0) -> int) g u in f"
)
try:
    infer(parse_context("c:int, u:unit"), escape)
except EscapeError as exc:
    print("rejected:", exc)
