"""Exception types shared across the package."""


class TreeSyntaxError(ValueError):
    """Raised when a tree expression cannot be parsed.

    ``offset`` is the byte offset into the (UTF-8 encoded) input at which
    parsing failed.
    """

    def __init__(self, message, offset=0):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class ResourceLimitError(RuntimeError):
    """An enumeration or search would exceed its configured cap."""


class InvariantError(RuntimeError):
    """An internal consistency check failed.

    These should never fire; if one does, either the input broke a
    documented precondition or a structural claim about shuffles is false.
    """
