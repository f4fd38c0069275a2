"""Base exceptions shared by the homology package.

The command line maps `InputError` to exit status 2 and
`ComputationError` to exit status 1.
"""


class InputError(Exception):
    """Raised when user-supplied data is malformed or inconsistent"""
    pass


class ComputationError(Exception):
    """Raised when a well-formed request cannot be carried out"""
    pass
