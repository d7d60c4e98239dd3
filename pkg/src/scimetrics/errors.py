"""Exception and warning classes shared across the package."""


class ScimetricsError(Exception):
    """Base class for all errors raised by scimetrics."""


# -- corpus -----------------------------------------------------------------

class CorpusError(ScimetricsError):
    pass


class ParseError(CorpusError):
    def __init__(self, path, line, reason):
        self.path = str(path)
        self.line = line
        self.reason = reason
        super().__init__(f"{self.path}:{line}: {reason}")


class DuplicateId(CorpusError):
    def __init__(self, kind, ident):
        self.kind = kind
        self.ident = ident
        super().__init__(f"duplicate {kind} id {ident!r}")


class DanglingReference(CorpusError):
    def __init__(self, paper_id, ref_id):
        self.paper_id = paper_id
        self.ref_id = ref_id
        super().__init__(f"paper {paper_id!r} cites unknown paper {ref_id!r}")


class UnknownEntity(ScimetricsError, KeyError):
    kind = "entity"

    def __init__(self, ident):
        self.ident = ident
        super().__init__(ident)

    def __str__(self):
        return f"unknown {self.kind} {self.ident!r}"


class UnknownPaper(UnknownEntity):
    kind = "paper"


class UnknownAuthor(UnknownEntity):
    kind = "author"


class UnknownJournal(UnknownEntity):
    kind = "journal"


class UnknownField(UnknownEntity):
    kind = "field"


class UnknownTopic(UnknownEntity):
    kind = "topic"


class UnknownUser(UnknownEntity):
    kind = "user"


class FutureDated(ScimetricsError, ValueError):
    def __init__(self, year, now_year):
        self.year = year
        self.now_year = now_year
        super().__init__(f"paper year {year} is after reference year {now_year}")


# -- metrics ----------------------------------------------------------------

class NoCitations(ScimetricsError):
    pass


class NoConvergence(ScimetricsError):
    def __init__(self, max_iter, residual=None):
        self.max_iter = max_iter
        self.residual = residual
        msg = f"no convergence after {max_iter} iterations"
        if residual is not None:
            msg += f" (last change {residual:.3e})"
        super().__init__(msg)


class DegenerateMatrix(ScimetricsError):
    pass


class KeyMismatch(ScimetricsError):
    pass


class EmptyField(ScimetricsError):
    pass


class CitationFree(EmptyField):
    """The field has papers, but none of them was ever cited."""


class SamePaper(ScimetricsError, ValueError):
    pass


class PairLimitExceeded(ScimetricsError):
    pass


# -- ranking ----------------------------------------------------------------

class ZeroMeanCriterion(ScimetricsError, ValueError):
    def __init__(self, criterion):
        self.criterion = criterion
        super().__init__(f"criterion {criterion!r} has zero mean")


class LengthMismatch(ScimetricsError, ValueError):
    pass


class WrongArity(ScimetricsError, ValueError):
    pass


class EmptyMatrix(ScimetricsError, ValueError):
    pass


# -- rating -----------------------------------------------------------------

class BudgetExhausted(ScimetricsError):
    def __init__(self, user, month):
        self.user = user
        self.month = month
        super().__init__(f"user {user!r} has no rating points left for {month}")


class InvalidScore(ScimetricsError, ValueError):
    pass


# -- review workflow --------------------------------------------------------

class WorkflowError(ScimetricsError):
    pass


class DuplicateManuscript(WorkflowError):
    pass


class InvalidTransition(WorkflowError):
    def __init__(self, op, state):
        self.op = op
        self.state = state
        super().__init__(f"{op} not allowed in state {state}")


class DuplicateReferee(WorkflowError):
    pass


class RoundFull(WorkflowError):
    pass


class IncompleteRound(WorkflowError):
    pass


# -- warnings ---------------------------------------------------------------

class ZeroDenominatorWarning(UserWarning):
    """A ratio had an empty denominator and was reported as 0."""


class SanctionedUserWarning(UserWarning):
    """A rating was stored for a user whose weight is currently zero."""


class CorpusWarning(UserWarning):
    pass
