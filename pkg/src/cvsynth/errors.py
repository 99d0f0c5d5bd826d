"""Exception and warning types.

Every domain error derives from :class:`SynthesisError`; the CLI prints the
class name verbatim on stderr, so renaming one is a breaking change.
"""


class SynthesisError(ValueError):
    """Base class for domain errors raised by the synthesis stack."""


class NonlocalityError(SynthesisError):
    """The coupling matrix is all zeros (or not finite)."""


class WrongClass(SynthesisError):
    """A propagator or synthesizer was asked for an unsupported coupling class."""


class Singular(SynthesisError):
    """A 2x2 block is (numerically) singular."""


class PoleAngle(SynthesisError):
    """Beam-splitter angle sits on the pole of tan(phi/2)."""


class ZeroAlpha(SynthesisError):
    """The free parameter of the single-mode squeezer family must be nonzero."""


class NonPositiveR(SynthesisError):
    """The optimal single-mode squeezer parameter is only defined for r > 0."""


class Degenerate(SynthesisError):
    """The two available Hamiltonians coincide up to sign (or the formula has a pole)."""


class OutOfRange(SynthesisError):
    """Target parameter outside the range where the closed form applies."""


class AboveThreshold(SynthesisError):
    """Two-mode squeezing exceeds what one 3-step oscillatory block can produce."""


class ClassMismatch(SynthesisError):
    """Parameters were synthesized for a different coupling class."""


class Unsupported(SynthesisError):
    """No synthesis route exists for this (coupling class, target) pair."""


class DocumentError(Exception):
    """A schedule document is malformed or cannot be read."""


class ConditioningWarning(RuntimeWarning):
    """Coupling is close to a degenerate point; interaction times blow up."""


class NoConvergence(RuntimeWarning):
    """No start of the brute-force solver reached the residual tolerance."""
