'''
Exceptions raised across homolab.
'''


class HomolabError(Exception):
    """Base class of every error homolab raises on purpose."""


class MalformedInputError(HomolabError):
    pass


class DomainError(HomolabError):
    pass


class MembershipError(HomolabError):
    pass


class ContainmentError(HomolabError):
    pass


class ResourceError(HomolabError):
    """A size cap was hit. ``partial`` holds whatever was computed before."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NumericError(HomolabError):
    pass


class UsageError(HomolabError):
    pass


class ConstructionError(HomolabError):
    """A generated object failed the identity it is built to satisfy."""
