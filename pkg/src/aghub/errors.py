"""Error types shared by all aghub modules.

Every failure carries a stable machine-readable ``code`` so the HTTP layer
and the CLI can map it without string matching on messages.
"""

from __future__ import annotations


class AghubError(Exception):
    """Base class; ``code`` is a stable kebab-case identifier."""

    code = "internal"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)
        self.message = message or self.code


class NotFoundError(AghubError):
    # Also returned when an entity exists but is invisible to the
    # requester: absence and invisibility must be indistinguishable.
    code = "not-found"


class PermissionDeniedError(AghubError):
    code = "permission-denied"


class PathConflictError(AghubError):
    code = "path-conflict"


class MissingParentError(AghubError):
    code = "missing-parent"


class InvalidPathError(AghubError):
    code = "invalid-path"


class InvalidUsernameError(AghubError):
    code = "invalid-username"


class DuplicateUsernameError(AghubError):
    code = "duplicate-username"


class ImmutableFieldError(AghubError):
    code = "immutable-field"


class InvalidMetadataError(AghubError):
    code = "invalid-metadata"


class CycleError(AghubError):
    code = "cycle"


class IsFolderError(AghubError):
    code = "is-folder"


class DuplicateMemberError(AghubError):
    code = "duplicate-member"


class SelfMemberError(AghubError):
    code = "self-member"


class NotACollectionError(AghubError):
    code = "not-a-collection"


class InvalidFilterError(AghubError):
    code = "invalid-filter"


class UnknownEntityError(AghubError):
    code = "unknown-entity"


class CycleDetectedError(AghubError):
    code = "cycle-detected"


class NotAToolError(AghubError):
    code = "not-a-tool"


class DuplicateArgError(AghubError):
    code = "duplicate-arg"


class MissingArgError(AghubError):
    code = "missing-arg"


class InvalidBindingError(AghubError):
    code = "invalid-binding"


class AlreadyTerminalError(AghubError):
    code = "already-terminal"


class UnauthorizedError(AghubError):
    code = "unauthorized"
