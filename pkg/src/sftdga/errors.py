"""Exception types shared across the package."""


class SftdgaError(Exception):
    """Base class for all errors raised by this package."""


class SignatureError(SftdgaError, ValueError):
    """Invalid contact data (bad multiplicity, duplicate ids, wrong c1 length, ...)."""


class UnknownVariableError(SftdgaError, KeyError):
    """A variable id that is not declared in the signature."""


class FlavorError(SftdgaError, ValueError):
    """Operation applied to an element whose flavor does not support it."""


class SignatureMismatchError(SftdgaError, ValueError):
    """Two operands built over different contact data."""


class WeylOrderError(SftdgaError, ValueError):
    """A word handed to normalize() needs the Weyl rewriting rule, which
    normalize() deliberately does not apply."""


class MissingImageError(SftdgaError, KeyError):
    """apply_d met a generator with no declared image."""


class SeriesWeightError(SftdgaError, ValueError):
    """Formal inverse requested for a series with a filtration-weight-0 term."""


class BoundsError(SftdgaError, ValueError):
    """Search or truncation bounds are missing or cannot be evaluated
    (for instance an action bound over orbits with no declared periods)."""


class LiftError(SftdgaError, ValueError):
    """A primitive lift or projection between incompatible flavors/specs."""


class ParseError(SftdgaError, ValueError):
    """Malformed input file: syntax errors carry line/column, semantic errors
    name the violated invariant."""
