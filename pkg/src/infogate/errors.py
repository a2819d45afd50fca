"""Exception types shared across the package.

The CLI maps these onto process exit codes (see cli.main), so raising the
right class from library code is part of the contract:

    ParseError              -> 2   malformed input file
    ConfigError             -> 3   bad flags, bounds, or distribution setup
    SemanticError           -> 4   structurally invalid netlist or candidate
    VitalityUndefinedError  -> 5   vitality requested for a zero-entropy function
"""


class ToolError(Exception):
    """Base class for user-facing errors."""


class ParseError(ToolError):
    """Malformed input text (PLA, BLIF, or library JSON)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class SemanticError(ToolError):
    """Input parses but violates a structural rule (cycle, double driver, ...)."""


class ConfigError(ToolError):
    """Invalid configuration: bounds, distribution arity, unsupported geometry."""


class VitalityUndefinedError(ToolError):
    """Vitality is a ratio with H(f) in the denominator; H(f) = 0 has no value."""
