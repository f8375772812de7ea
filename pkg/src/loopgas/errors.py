"""Exception hierarchy shared by every module.

Each exception carries the process exit code the CLI maps it to.
"""
from __future__ import annotations

__all__ = [
    "LoopGasError",
    "ParseError",
    "StructuralError",
    "MissingEntry",
    "AxiomViolation",
    "NonConvergence",
    "InconsistentDims",
    "NonPhase",
    "MembershipDisagreement",
    "NonPlanar",
    "InadmissibleVertex",
    "NonTermination",
    "EigenFailure",
    "FastpathMismatch",
    "ExplosionGuard",
    "Unsupported",
    "InvalidAlgebra",
    "NotCommutative",
    "BadParameters",
    "GeneratorInvalid",
]


class LoopGasError(Exception):
    """Base class. ``exit_code`` is what the CLI returns when this escapes."""

    exit_code = 3


class ParseError(LoopGasError):
    exit_code = 2

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.field = field
        self.line = line


class StructuralError(LoopGasError):
    """Shapes or index sets are inconsistent with the declared rank."""

    exit_code = 2


class MissingEntry(LoopGasError):
    """An admissible F or R key has no value."""

    exit_code = 2

    def __init__(self, kind: str, key: tuple):
        super().__init__(f"missing admissible {kind} entry {key}")
        self.kind = kind
        self.key = key


class AxiomViolation(LoopGasError):
    def __init__(self, axiom: str, indices=None, residual: float | None = None):
        msg = f"axiom {axiom!r} violated"
        if indices is not None:
            msg += f" at {indices}"
        if residual is not None:
            msg += f" (residual {residual:.3e})"
        super().__init__(msg)
        self.axiom = axiom
        self.indices = indices
        self.residual = residual


class NonConvergence(LoopGasError):
    pass


class InconsistentDims(AxiomViolation):
    def __init__(self, indices=None, residual: float | None = None):
        super().__init__("dimension equations", indices, residual)


class NonPhase(AxiomViolation):
    def __init__(self, label, value: complex):
        super().__init__("twist is a phase", (label,), abs(abs(value) - 1.0))
        self.value = value


class MembershipDisagreement(LoopGasError):
    pass


class NonPlanar(LoopGasError):
    pass


class InadmissibleVertex(LoopGasError):
    pass


class NonTermination(LoopGasError):
    pass


class EigenFailure(LoopGasError):
    pass


class FastpathMismatch(LoopGasError):
    pass


class ExplosionGuard(LoopGasError):
    exit_code = 4


class Unsupported(LoopGasError):
    """A computation with no known closed form or outside the supported scope."""

    exit_code = 4


class InvalidAlgebra(AxiomViolation):
    pass


class NotCommutative(InvalidAlgebra):
    pass


class BadParameters(LoopGasError):
    exit_code = 1


class GeneratorInvalid(LoopGasError):
    pass
