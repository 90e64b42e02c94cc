class ParrondoError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateSpectrum(ParrondoError):
    pass


class NotInDeltaB(ParrondoError):
    pass


class Undetected(ParrondoError):
    """Step budget exhausted before an equilibrium or a cycle was recognised."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class BadIndex(ParrondoError, ValueError):
    pass


class SNotFound(ParrondoError):
    pass


class BoundaryAmbiguous(ParrondoError):
    """A decisive sign stayed within rounding noise at the precision cap."""

    def __init__(self, curve: str):
        super().__init__(f"sign of {curve} is undecidable at the precision cap")
        self.curve = curve


class NoSignChange(ParrondoError):
    def __init__(self, curve: str, lo, hi):
        super().__init__(f"{curve} has the same sign at phi={lo} and phi={hi}")
        self.curve = curve


class NotInPartition(ParrondoError):
    pass


class PredicateAmbiguous(ParrondoError):
    pass


class WrongRegion(ParrondoError):
    pass


class NotACycle(ParrondoError):
    pass
