"""Exception types shared across the package."""


class TreepropError(Exception):
    """Base class for all package errors."""


class InputError(TreepropError):
    """Malformed or contract-violating input (bad JSON, arity mismatch, ...)."""


class OracleError(InputError):
    """Formula set not evaluable by the selected oracle kind."""


class ConstructionError(TreepropError):
    """A witness construction or transform cannot proceed as requested."""


class Case2Required(ConstructionError):
    """The consistent-case IP extraction does not apply; use the block transform."""
