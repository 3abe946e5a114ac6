"""Exception hierarchy. Verdicts are values; these are for invalid data and bugs."""


class HopfCrossError(Exception):
    pass


class AmbientDimensionError(HopfCrossError, ValueError):
    pass


class ParentMismatchError(HopfCrossError, ValueError):
    pass


class NotCStarError(HopfCrossError):
    """A computed rank/block size failed integer certification."""


class NotProjectionError(HopfCrossError, ValueError):
    pass


class NotUnitaryError(HopfCrossError, ValueError):
    pass


class InvalidGroupError(HopfCrossError, ValueError):
    pass


class HopfAxiomError(HopfCrossError, ValueError):
    pass


class CoactionError(HopfCrossError, ValueError):
    pass


class CocycleError(HopfCrossError, ValueError):
    pass


class ConstructionError(HopfCrossError):
    """A built object failed its own invariants (a convention bug, never user error)."""


class UnsupportedSizeError(HopfCrossError):
    pass


class InconsistencyError(HopfCrossError):
    """Two decision routes that must agree by theorem disagreed."""


class InvalidInputError(HopfCrossError, ValueError):
    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class ActionError(HopfCrossError, ValueError):
    """Per-element matrices do not form a group action by *-automorphisms."""
