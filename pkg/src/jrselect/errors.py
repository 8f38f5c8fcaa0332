"""Exception types shared across the package."""


class JRSelectError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(JRSelectError, ValueError):
    """Invalid model input (bad indices, malformed partitions, bad parameters)."""


class ItemIndexError(ValidationError):
    """An item index falls outside [0, m)."""


class CommitteeSizeError(ValidationError):
    """The committee size k violates 1 <= k <= m."""


class PartitionError(ValidationError):
    """A group assignment is not a partition of the user set."""


class NegativeScoreError(ValidationError):
    """An externally supplied score is negative."""


class ProbabilityError(ValidationError):
    """A probability or cutoff falls outside [0, 1]."""


class MissingGroupsError(ValidationError):
    """A group-based rule was evaluated on an instance without groups."""


class MissingScoresError(ValidationError):
    """The external rule was evaluated without a complete score table."""


class EmptyGroupError(ValidationError):
    """A group operation received an empty user set."""


class UnapprovedItemError(ValidationError):
    """The seeded item has no approver, so no justified set can be grown from it."""


class ProfileTooLargeError(ValidationError):
    """The brute-force verifier only accepts small user counts."""


class PermutationError(ValidationError):
    """A ranking argument is not a permutation of range(m)."""


class ParameterError(ValidationError):
    """Parameters of a generator or bound are out of range or indivisible."""


class BudgetExceededError(JRSelectError, RuntimeError):
    """Exact enumeration would exceed the configured subset budget."""


class ParseError(ValidationError):
    """A CSV or JSON input file is malformed."""


class DuplicatePairError(ParseError):
    """The same (user, item) pair appears twice in an approval file."""


class MixedModeError(ParseError):
    """A non-binary value appeared in a binary-mode approval file."""


class MissingUserError(ParseError):
    """A group file skips a user id."""


class DuplicateUserError(ParseError):
    """A group file assigns the same user twice."""


class NetworkError(JRSelectError, OSError):
    """A dataset could not be retrieved (offline, unreachable, bad URL)."""


class ChecksumError(NetworkError):
    """A fetched file does not match its pinned digest."""
