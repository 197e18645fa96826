import io
import subprocess
import sys

from openclosure.cli import run

SESSION = r"let y = (y1, y2) in (y, \(x:s) z)"

GOLDEN_ASCII = """\
Parsed expression: let y = (y1, y2) in (y, \\(x:s) z)

The variables (y1, y2, z) were unbound; we add them to the default
environment with dummy types (ty_y1, ty_y2, ty_z) and values
(val_y1, val_y2, val_z).

Inferred typing:
  y1:ty_y1^1,y2:ty_y2^1,z:ty_z^0 |-
    let y = (y1, y2) in (y, \\(x:s) z)
    : (ty_y1 * ty_y2) * [y1:ty_y1^0,y2:ty_y2^0,z:ty_z^1](x:s^0) -> ty_z

Result value:
    ((val_y1, val_y2), ([y1,y2,z], ((y |-> (val_y1, val_y2))), \\(x) z))
"""


def test_session_golden_ascii():
    code, out, err = run(["--ascii", "-e", SESSION])
    assert (code, err) == (0, "")
    assert out == GOLDEN_ASCII


def test_session_unicode():
    code, out, _ = run(["-e", "let y = (y1, y2) in (y, λ(x:s) z)"])
    assert code == 0
    assert "  y1:ty_y1¹,y2:ty_y2¹,z:ty_z⁰ ⊢\n" in out
    assert "((val_y1, val_y2), ([y1,y2,z], ((y ↦ (val_y1, val_y2))), λ(x) z))" in out


def test_output_is_byte_stable():
    assert run(["-e", SESSION])[1] == run(["-e", SESSION])[1]


def test_stdin_and_file_input(tmp_path):
    assert run(["--ascii"], stdin=io.StringIO(SESSION))[1] == GOLDEN_ASCII
    src = tmp_path / "prog.oc"
    src.write_text(SESSION + "\n", encoding="utf-8")
    assert run(["--ascii", str(src)])[1] == GOLDEN_ASCII


def test_derivations_are_rendered():
    code, out, _ = run(["--ascii", "--typing-derivation", "--reduction-derivation", "-e", SESSION])
    assert code == 0
    assert "Typing derivation:\nLet: y1:ty_y1^1,y2:ty_y2^1,z:ty_z^0 |- " in out
    assert "Reduction derivation:\nRed-Let: " in out


def test_syntax_error_exit_code():
    code, out, err = run(["-e", "let x = ("])
    assert code == 2 and "SyntaxError" in err and "line 1" in err


def test_ill_scoped_annotation():
    code, _, err = run(["-e", r"\(g:[q:a^0](x:a^0) -> a) g"])
    assert code == 1 and "IllScoped" in err


def test_type_error_exit_code():
    code, _, err = run(["-e", "pi1 v"])
    assert code == 1 and "TypeMismatch" in err


def test_budget_exceeded():
    code, _, err = run(["--context", "v:a", "--max-steps", "50", "-e", "(fix f(x:a):a = f x) v"])
    assert code == 1 and "BudgetExceeded" in err


def test_strict_mode():
    code, _, err = run(["--strict", "-e", "q"])
    assert code == 1 and "UnboundVariable" in err
    code, out, _ = run(["--strict", "--context", "q:a", "-e", "q"])
    assert code == 0 and "unbound" not in out


def test_classic_mode():
    code, out, _ = run(["--ascii", "--classic", "-e", SESSION])
    assert code == 0
    assert "([y1 |-> val_y1, y2 |-> val_y2, z |-> val_z, y |-> (val_y1, val_y2)], \\(x) z)" in out


def test_noninterference_report():
    code, out, _ = run(["--ascii", "--check-noninterference", "-e", SESSION])
    assert code == 0 and "violations: 0" in out
    code, out, _ = run(["--check-noninterference", "--report-format", "jsonl", "-e", "x"])
    assert code == 0 and out.rstrip().endswith("2 pairs tested, 0 violations")


def test_harness_violation_exit_code():
    # fix returns a closure still waiting for its own bindings (see the fidelity tests)
    code, _, err = run(["--context", "v:a", "-e", "(fix f(x:a):[v:a^0,x:a^1](p:a^0) -> a = \\(p:a) x) v"])
    assert code == 3 and "does not inhabit" in err


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "openclosure.cli", "--ascii", "-e", SESSION],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == GOLDEN_ASCII
