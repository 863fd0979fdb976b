"""Exception hierarchy shared by the library and the command line."""


class TernlabError(Exception):
    """Base class for ternlab errors."""


class InputError(TernlabError, ValueError):
    """Malformed or out-of-range input."""


class ResourceLimitError(TernlabError):
    """A computation would exceed a configured size bound."""


class AxiomError(TernlabError):
    """A table lacks an axiom that the requested computation depends on."""
