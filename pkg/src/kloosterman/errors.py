"""Exception hierarchy shared across the package."""


class KloostermanError(Exception):
    """Base class for all errors raised by this package."""


class NotAUnit(KloostermanError):
    """Modular inverse requested for a residue divisible by p."""


class ZeroModulus(KloostermanError):
    """Inverse requested modulo p^0 = 1."""


class ZeroInput(KloostermanError):
    """Valuation or p-part requested for 0."""


class PrimeMismatch(KloostermanError):
    """Two cyclotomic values with different primes were combined."""


class LevelTooSmall(KloostermanError):
    """A root of unity does not fit into the requested cyclotomic level."""


class BudgetExceeded(KloostermanError):
    """An enumeration would exceed the configured term budget."""

    def __init__(self, required, budget):
        super().__init__(f"enumeration requires {required} terms, budget is {budget}")
        self.required = required
        self.budget = budget


class NotInStratum(KloostermanError):
    """An exponent matrix does not satisfy the row-sum constraints for r."""


class LengthMismatch(KloostermanError):
    """Parameter list does not match the reduced word length."""


class BadIndex(KloostermanError):
    """Simple-root index outside 1..n."""


class SingularMatrix(KloostermanError):
    """Bruhat decomposition requested for a singular matrix."""
