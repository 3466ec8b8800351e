"""Exception hierarchy shared by all qcrw modules."""


class QcrwError(Exception):
    """Base class for every error raised by this package."""


class ArityMismatch(QcrwError):
    """Sequential composition of circuits with different wire counts."""


class FlavorMismatch(QcrwError):
    """Composition of a quantum circuit with a linear-optical one."""


class ParseError(QcrwError):
    """DSL text rejected; carries 1-based line/column of the offending token."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class WireRangeError(QcrwError):
    """Wire/mode index outside the declared circuit width."""


class RangeError(QcrwError):
    """Integer argument outside its documented range (e.g. Gray code rank)."""


class DimensionCapExceeded(QcrwError):
    """Dense semantics requested beyond the configured qubit/mode cap."""


class NotUnitary(QcrwError):
    """Matrix fails the unitarity check at the required tolerance."""


class DimensionMismatch(QcrwError):
    """Two matrices compared with different dimensions."""


class UnsupportedBase(QcrwError):
    """Multi-controlled gate requested for a base outside {s, X, R_X, P}."""


class StaleMatch(QcrwError):
    """Rewrite applied at a position that no longer matches the circuit."""


class SoundnessViolation(QcrwError):
    """A rewrite rule failed its semantic check; carries the counterexample."""

    def __init__(self, rule: str, angles: dict, deviation: float):
        super().__init__(
            f"rule {rule} unsound at {angles}: max deviation {deviation:.3e}"
        )
        self.rule = rule
        self.angles = angles
        self.deviation = deviation


class NotPowerOfTwoModes(QcrwError):
    """Decoding requires an optical circuit on exactly 2**n modes."""


class BudgetExceeded(QcrwError):
    """Normalization step budget exhausted (reported, normally not raised)."""
