"""Exception hierarchy for the ppress toolkit.

Every failure mode that callers are expected to handle has its own class;
the CLI maps these onto stable exit codes.
"""


class PpressError(Exception):
    """Base class for all toolkit errors."""


# --- distribution / model errors ---

class NonFiniteProbability(PpressError):
    """A probability vector contained NaN or an infinite entry."""


class LengthMismatch(PpressError):
    """Two distributions (or a vector and its alphabet) disagree on length."""


# --- coder errors ---

class IntervalUnderflow(PpressError):
    """The coding interval became too narrow to resolve a minimum-frequency
    symbol.  Indicates an implementation bug, never valid input."""


class DoubleFinalize(PpressError):
    """finalize() was called twice on the same encoder."""


class SourceExhausted(PpressError):
    """The bit stream ended before the decoder could resolve a symbol
    (truncated or corrupt input)."""


# --- remote predictor errors ---

class RemoteUnavailable(PpressError):
    """The logit server could not be reached (or timed out)."""


class RemoteProtocolViolation(PpressError):
    """The logit server sent a malformed or invariant-breaking reply."""


# --- container errors ---

class BadContainer(PpressError):
    """The container bytes are not a valid ppress container."""


class DigestMismatch(PpressError):
    """Reconstructed text does not match the recorded digest."""


class UnknownPredictor(PpressError):
    """The registry cannot instantiate the predictor recorded in a header."""


class TokenizationNotInvertible(PpressError):
    """detokenize(tokenize(text)) != text; token-level coding is unsafe."""


# --- analysis errors ---

class EmptyCorpus(PpressError):
    """The requested statistic is undefined on an empty token stream."""


# --- bench harness errors ---

class SpecError(PpressError):
    """An experiment spec failed validation."""


class ExternalToolFailure(PpressError):
    """An external baseline compressor failed or produced a bad round-trip."""


class InternalVerificationError(PpressError):
    """An internal compressor failed its lossless round-trip check."""
