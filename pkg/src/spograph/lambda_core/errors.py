"""Exceptions raised by the attribute language."""


class LambdaError(Exception):
    """Base class for attribute-language errors."""


class IllTyped(LambdaError):
    """A term (or type) is not well formed in its context."""


class UnboundVariable(IllTyped):
    def __init__(self, name, path=()):
        self.name = name
        self.path = tuple(path)
        super().__init__(f"unbound variable {name!r} at {_where(path)}")


class UnknownType(IllTyped):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown type {name!r}")


class UnknownConstructor(IllTyped):
    def __init__(self, name, ind=None):
        self.name = name
        self.ind = ind
        suffix = f" of {ind}" if ind else ""
        super().__init__(f"unknown constructor {name!r}{suffix}")


class TypeMismatch(IllTyped):
    """``expected`` is a Type, or a short description such as "a function type"."""

    def __init__(self, expected, actual, term=None, path=()):
        self.expected = expected
        self.actual = actual
        self.term = term
        self.path = tuple(path)
        super().__init__(
            f"type mismatch at {_where(path)}: expected {expected}, got {actual}"
        )


class ConstructorArityMismatch(IllTyped):
    def __init__(self, name, expected, actual, path=()):
        self.path = tuple(path)
        super().__init__(
            f"constructor {name} takes {expected} argument(s), got {actual} at {_where(path)}"
        )


class BranchArityMismatch(IllTyped):
    def __init__(self, ind, expected, actual, path=()):
        self.ind = ind
        self.expected = expected
        self.actual = actual
        self.path = tuple(path)
        super().__init__(
            f"Rec over {ind} needs {expected} branch(es), got {actual} at {_where(path)}"
        )


class InductiveDefinitionError(IllTyped):
    """Bad inductive declaration: positivity, duplicate constructors, ..."""


class IllTypedBinding(IllTyped):
    def __init__(self, name, message):
        self.name = name
        super().__init__(f"binding for {name!r}: {message}")


class FuelExhausted(LambdaError):
    def __init__(self, limit):
        self.limit = limit
        super().__init__(f"normalization exceeded its budget of {limit} steps")


class PatternError(LambdaError):
    pass


class NonLinearPattern(PatternError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"pattern variable {name!r} occurs more than once")


class HigherOrderPattern(PatternError):
    def __init__(self, message):
        super().__init__(message)


def _where(path):
    return "/".join(path) if path else "root"
