"""Exception hierarchy shared by every module."""


class KidaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidModulus(KidaError, ValueError):
    pass


class NoSquareRoot(KidaError, ValueError):
    pass


class NotCoprime(KidaError, ValueError):
    pass


class EmptyInput(KidaError, ValueError):
    pass


class ModulusMismatch(KidaError, ValueError):
    pass


class NotMonic(KidaError, ValueError):
    pass


class CostGuard(KidaError):
    """Input would take an unreasonable amount of work."""


class NoRepresentation(KidaError, ValueError):
    pass


class SmallPrimeUnsupported(KidaError, ValueError):
    pass


class OutOfRange(KidaError, ValueError):
    pass


class RootNotFound(KidaError):
    def __init__(self, ell):
        super().__init__(f"f(t) has no root modulo {ell}")
        self.ell = ell


class AssumptionViolation(KidaError):
    def __init__(self, flag):
        super().__init__(f"assumption not satisfied: {flag}")
        self.flag = flag


class DecompositionViolation(AssumptionViolation):
    def __init__(self, label):
        KidaError.__init__(
            self,
            f"assumption not satisfied: finitely decomposed "
            f"(place {label!r} is infinitely decomposed)",
        )
        self.flag = "finitely_decomposed"
        self.label = label


class DegreeMismatch(KidaError, ValueError):
    pass


class InvalidCorank(KidaError, ValueError):
    pass


class ContradictsLemma(KidaError, ValueError):
    pass


class SchemaError(KidaError, ValueError):
    """A tower-spec, ledger or cache file does not match its schema."""
