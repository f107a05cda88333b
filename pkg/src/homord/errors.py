"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Malformed input: bad tables, out-of-range points, wrong class, bad spec."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed its configured desk-scale bound."""


class SaturationInfeasibleError(RuntimeError):
    """Witness completion hit the size cap before reaching the requested depth."""


class TypeNotRealizedError(ValueError):
    """The requested 2-type does not occur in the structure (distinct from 'no path')."""
