"""Exception types shared across the package.

Two of these (ScoreMismatch, StartNotFound) indicate internal bugs rather
than bad input: the pipeline cross-checks every phase against the score the
previous phase established, and a mismatch means an invariant was broken.
"""


class AlignError(Exception):
    """Base class for all wavealign errors."""


# -- scoring scheme validation ------------------------------------------------

class NonPositiveMaxScore(AlignError):
    """No substitution pair scores above zero; no local alignment can exist."""


class IncompleteMatrix(AlignError):
    """A substitution score is undefined for some symbol pair."""


# -- path bookkeeping ----------------------------------------------------------

class PathInconsistent(AlignError):
    """Edit operations contradict the residues they claim to consume."""


class DiscontiguousParts(AlignError):
    """Joined sub-paths do not meet end-to-start."""


# -- engine --------------------------------------------------------------------

class WorkerPanic(AlignError):
    """A block kernel raised inside the worker pool."""


# -- internal-bug class (CLI exit code 1) ---------------------------------------

class ScoreMismatch(AlignError):
    """A reconstruction stage failed to reproduce the known optimal score."""


class StartNotFound(AlignError):
    """The reverse pass found no cell attaining the known optimal score."""


BUG_ERRORS = (ScoreMismatch, StartNotFound)


# -- reference oracle ------------------------------------------------------------

class CellBudgetExceeded(AlignError):
    """Oracle refused an input whose full DP matrix is too large."""


# -- input parsing (CLI exit code 3) ---------------------------------------------

class InputError(AlignError):
    """Base class for malformed input files."""


class EmptyFile(InputError):
    pass


class NoRecords(InputError):
    pass


class IllegalResidue(InputError):
    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class RaggedRow(InputError):
    pass


class UnknownSymbol(InputError):
    pass


class NonInteger(InputError):
    pass
