"""Error hierarchy shared by all modules.

Exit codes used by the CLI: domain=2, pole=3, precision=4, convergence=5.
Parse/IO failures exit 1 without going through this hierarchy.
"""


class PadicSiegelError(Exception):
    exit_code = 1


class DomainError(PadicSiegelError):
    """Input outside the mathematical domain of an operation."""
    exit_code = 2


class UnsupportedCharacterError(DomainError):
    """Finite-order character whose values do not embed in Z_p."""


class PoleError(PadicSiegelError):
    """Evaluation requested at a pole; carries the residue when known."""
    exit_code = 3

    def __init__(self, message, residue=None):
        super().__init__(message)
        self.residue = residue


class PrecisionError(PadicSiegelError):
    """Requested precision not reachable (density stabilization, truncation)."""
    exit_code = 4


class ConvergenceError(PadicSiegelError):
    """Iteration cap exceeded before a p-adic limit stabilized."""
    exit_code = 5
