"""Exception taxonomy shared by every predimlab module."""


class PredimlabError(Exception):
    """Base class for all predimlab errors."""


class InputError(PredimlabError):
    """Malformed parameters, vertex ids, or file contents."""


class CapacityError(PredimlabError):
    """An enumeration or canonicalization cap was exceeded.

    Carries the cap name and value so callers can report which limit fired.
    """

    def __init__(self, cap_name: str, cap_value: int, requested: int):
        self.cap_name = cap_name
        self.cap_value = cap_value
        self.requested = requested
        super().__init__(
            f"{cap_name} cap exceeded: requested {requested}, cap {cap_value}"
        )


class ContractError(PredimlabError):
    """A documented precondition of an operation does not hold."""


class InternalError(PredimlabError):
    """An invariant that should be unbreakable was broken; abort loudly."""
