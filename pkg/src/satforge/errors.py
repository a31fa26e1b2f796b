"""Exception types shared across the package."""


class SatforgeError(Exception):
    """Base class for all package-specific errors."""


class DimacsParseError(SatforgeError):
    """Malformed DIMACS input. Carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CapacityError(SatforgeError):
    """Input exceeds the hard size cap of an exhaustive procedure."""


class OracleFaultError(SatforgeError):
    """The supplied satisfiability oracle contradicted itself."""


class ConfigError(SatforgeError):
    """Invalid or unsupported generator/pipeline configuration."""
