"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FreeCurvesError(Exception):
    """Base class for every error raised by this package."""


class FieldMismatchError(FreeCurvesError, ValueError):
    pass


class DimensionMismatchError(FreeCurvesError, ValueError):
    pass


class InvalidComplexError(FreeCurvesError):
    """A complex failed one of its validity invariants.

    ``invariant`` names the failed check: ``"composite_nonzero"``,
    ``"not_subbundle"`` or ``"not_fiber_surjective"``.
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        self.detail = detail
        msg = invariant if not detail else f"{invariant}: {detail}"
        super().__init__(msg)


class SplittingInconsistencyError(FreeCurvesError, RuntimeError):
    """Recovered splitting type disagrees with directly computed cohomology.

    This always signals a bug; it is never a mathematical outcome.
    """


class WildBoundaryError(FreeCurvesError, ValueError):
    def __init__(self, characteristic: int, degree: int):
        self.characteristic = characteristic
        self.degree = degree
        super().__init__(
            f"wild boundary: characteristic {characteristic} divides boundary degree {degree}"
        )


class WildCoverError(FreeCurvesError, ValueError):
    def __init__(self, characteristic: int, degree: int):
        self.characteristic = characteristic
        self.degree = degree
        super().__init__(
            f"cover of degree {degree} is inseparable in characteristic {characteristic}"
        )


class ContainmentError(FreeCurvesError, ValueError):
    """The curve does not lie on the variety."""


class ProfileError(FreeCurvesError, ValueError):
    pass


class SpanFailureError(FreeCurvesError, ValueError):
    """The two distinguished fiber subspaces do not span the node fiber."""

    def __init__(self, msg: str, deficient_subspace=None):
        self.deficient_subspace = deficient_subspace
        super().__init__(msg)


class RankDeficientError(FreeCurvesError, ValueError):
    pass
