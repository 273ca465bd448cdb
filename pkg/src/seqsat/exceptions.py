"""Exception types raised across the package."""


class SeqSatError(ValueError):
    """Base class for every error raised by seqsat."""


class EmptyDataset(SeqSatError):
    pass


class MalformedLine(SeqSatError):
    pass


class ReservedToken(SeqSatError):
    pass


class MinsupOutOfRange(SeqSatError):
    pass


class Overflow(SeqSatError):
    pass


class IllFormedModel(SeqSatError):
    pass


class SubsequenceBlowup(SeqSatError):
    def __init__(self, pattern, cap):
        self.pattern = tuple(pattern)
        self.cap = cap
        super().__init__(
            f"pattern of length {len(self.pattern)} has 2^{len(self.pattern)} "
            f"subsequences, above the cap of {cap}: {' '.join(map(str, self.pattern))}"
        )


class PartialGapTable(SeqSatError):
    pass


class RegexSyntax(SeqSatError):
    pass


class TokenNotInVocabulary(SeqSatError):
    pass


class BudgetExceeded(SeqSatError):
    pass
