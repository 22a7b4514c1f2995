"""Exception hierarchy shared by the kernel, the decomposition engine and the CLI."""


class MetabelianError(Exception):
    """Base class for every domain error raised by this package."""


class DimensionError(MetabelianError, ValueError):
    """Operands live over different rings (variable count or field)."""


class DomainError(MetabelianError, ValueError):
    """An argument is outside the domain of an operation."""


class NotADerivativeError(DomainError):
    """A column a over U with Y.a != 0 was passed where a Fox column is required."""


class NotAnAutomorphismError(DomainError):
    pass


class HypothesisError(DomainError):
    """The input violates a degree / rank / characteristic hypothesis."""


class CubicObstructionError(HypothesisError):
    """A tame decomposition was blocked by a y1-linear (cubic residue) monomial."""

    def __init__(self, message, residues=()):
        super().__init__(message)
        self.residues = tuple(residues)


class CertificationError(MetabelianError, RuntimeError):
    """An identity that must hold exactly failed on recomposition."""


class ParseError(MetabelianError, ValueError):
    def __init__(self, message, text="", pos=0):
        self.text = text
        self.pos = pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line = line
        self.column = col
        super().__init__(f"{message} (line {line}, column {col})")
