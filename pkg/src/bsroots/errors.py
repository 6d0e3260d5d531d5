"""Exception hierarchy.

Input problems derive from :class:`InputError`; broken mathematical
invariants (which indicate a bug or an input violating the standing
hypotheses in a way the cheap checks did not catch) derive from
:class:`InvariantError`.
"""


class BsrootsError(Exception):
    pass


class InputError(BsrootsError):
    pass


class InvariantError(BsrootsError):
    pass


class PolySyntaxError(InputError):
    """Bad token or grammar in a polynomial string."""


class NotHomogeneous(InputError):
    pass


class ZeroPolynomial(InputError):
    pass


class NotIsolated(InputError):
    """The Milnor algebra Hilbert function does not become constant."""


class NotStabilized(InvariantError):
    """mu_{nd-n} and mu_{nd} disagree although mu is eventually constant."""


class NegativeNu(InvariantError):
    pass


class NegativeSplit(InvariantError):
    pass


class ChiMismatch(InvariantError):
    pass


class InvalidWeights(InputError):
    pass


class NotPolynomial(InvalidWeights):
    """The spectrum generating function did not clear its denominator."""


class NonIntegerMilnor(InvalidWeights):
    pass


class NotWeightedHomogeneous(InputError):
    pass


class UnknownType(InputError):
    pass


class WViolation(InputError):
    """Total Tjurina number differs from the total Milnor number."""

    def __init__(self, tau, mu):
        self.tau = tau
        self.mu = mu
        super().__init__(
            f"tau_Z = {tau} but mu_Z = {mu}: either some singular point is not "
            f"weighted homogeneous or the singularity list is incomplete"
        )


class NotApplicable(BsrootsError):
    pass


class ArnoldBoundViolation(InvariantError):
    pass


class E2Mismatch(InvariantError):
    """delta_k and mu2_k disagree where they must coincide."""
