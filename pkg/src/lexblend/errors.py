"""Exception types shared across the package."""


class LexblendError(Exception):
    """Base class for every package-specific error."""


class EmptyCorpus(LexblendError):
    """No usable tokens were found while building a vocabulary."""


class UnknownWord(LexblendError):
    """A word id or surface form is not present in the vocabulary."""


class NoQualifyingSentences(LexblendError):
    """Every sentence fell below the content-word threshold."""


class RankTooLarge(LexblendError):
    """Requested decomposition rank exceeds what the matrix supports."""


class CandidateUnknown(LexblendError):
    """Candidate word has no usable semantic vector."""


class ZeroContext(LexblendError):
    """Similarity normalization needs at least one context word with a vector."""


class DegenerateTerm(LexblendError):
    """A probability term that must be positive was zero or negative."""


class ParseError(LexblendError):
    """A challenge file line could not be parsed."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class IoError(LexblendError):
    """A model container could not be written or read."""


class CorruptModel(LexblendError):
    """Model container bytes fail structural or checksum validation."""


class UnsupportedVersion(LexblendError):
    """Model container was written by an incompatible format version."""
