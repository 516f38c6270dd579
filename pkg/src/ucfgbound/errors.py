"""Exception hierarchy shared by every module of the package."""


class UcfgError(Exception):
    """Base class for all package errors."""


class EmptyLanguage(UcfgError):
    """The start symbol derives no terminal word."""


class InfiniteLanguage(UcfgError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("grammar derives an infinite language; cycle: "
                         + " -> ".join(self.cycle))


class EmptyWordDerivable(UcfgError):
    def __init__(self, nonterminal):
        self.nonterminal = nonterminal
        super().__init__(f"nonterminal {nonterminal!r} derives the empty word")


class CapExceeded(UcfgError):
    def __init__(self, what, limit, value=None):
        self.what = what
        self.limit = limit
        self.value = value
        detail = f" (got {value})" if value is not None else ""
        super().__init__(f"{what} exceeds cap {limit}{detail}")


class MixedLengths(UcfgError):
    def __init__(self, nonterminal, len1, len2):
        self.nonterminal = nonterminal
        self.lengths = (len1, len2)
        super().__init__(
            f"nonterminal {nonterminal!r} derives words of lengths {len1} and {len2}")


class NotCNF(UcfgError):
    """A routine that needs Chomsky normal form got something else."""


class OddLength(UcfgError):
    pass


class NotDivisibleBy4(UcfgError):
    pass


class UnbalanceableAtThisN(UcfgError):
    pass


class NotACover(UcfgError):
    def __init__(self, message, missing=(), extra=()):
        self.missing = tuple(missing)
        self.extra = tuple(extra)
        super().__init__(message)


class NotDisjoint(UcfgError):
    def __init__(self, message, pair=None, witness=None):
        self.pair = pair
        self.witness = witness
        super().__init__(message)


class GrammarParseError(UcfgError):
    def __init__(self, message, line, column):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")
