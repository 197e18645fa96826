"""Exception hierarchy shared by every judgment."""


class CalculusError(Exception):
    """Base class. ``path`` lists the derivation rules traversed to the failure."""

    exit_code = 1

    def __init__(self, message, path=()):
        super().__init__(message)
        self.message = message
        self.path = list(path)

    def with_frame(self, frame):
        self.path.insert(0, frame)
        return self

    def __str__(self):
        if not self.path:
            return self.message
        return f"{self.message} (at {' > '.join(self.path)})"


class ParseError(CalculusError):
    exit_code = 2

    def __init__(self, message, line=0, column=0):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class IllScoped(CalculusError):
    def __init__(self, name, offending=None):
        super().__init__(f"IllScoped: variable {name} is not bound in the enclosing context")
        self.name = name
        self.offending = offending


class NotPrefix(CalculusError):
    def __init__(self, captured, ambient):
        super().__init__(
            f"NotPrefix: captured context [{', '.join(captured)}] is not a prefix of "
            f"[{', '.join(ambient)}]"
        )
        self.captured = tuple(captured)
        self.ambient = tuple(ambient)


class PrefixError(NotPrefix):
    """A closure is applied in a context it was not created in."""


class EscapeError(CalculusError):
    def __init__(self, name, position=()):
        where = "/".join(position) or "argument"
        super().__init__(
            f"EscapeError: variable {name} escapes its scope through a function "
            f"argument type ({where})"
        )
        self.name = name
        self.position = tuple(position)


class UnboundVariable(CalculusError):
    def __init__(self, name):
        super().__init__(f"UnboundVariable: {name}")
        self.name = name


def _show(ty):
    if isinstance(ty, str):
        return ty
    from .printer import print_type

    return print_type(ty)


class TypeMismatch(CalculusError):
    def __init__(self, expected, found, location=""):
        super().__init__(f"TypeMismatch: expected {_show(expected)}, found {_show(found)} {location}".rstrip())
        self.expected = expected
        self.found = found


class NotAFunction(CalculusError):
    def __init__(self, ty):
        super().__init__(f"NotAFunction: cannot apply a value of type {_show(ty)}")
        self.type = ty


class MalformedPending(CalculusError):
    def __init__(self, name, pending):
        super().__init__(
            f"MalformedPending: {name} is pending but not last in [{', '.join(pending)}]"
        )


class ValueTypeMismatch(CalculusError):
    pass


class WitnessNotFound(CalculusError):
    pass


class StuckError(CalculusError):
    pass


class BudgetExceeded(CalculusError):
    def __init__(self, budget):
        super().__init__(f"BudgetExceeded: evaluation exceeded {budget} rule applications")
        self.budget = budget


class CombinatorialLimit(CalculusError):
    pass


class GenerationExhausted(CalculusError):
    pass


class InvariantViolation(CalculusError):
    """An internal invariant that well-formed judgments never break."""
