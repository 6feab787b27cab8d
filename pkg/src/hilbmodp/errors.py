"""Exception types shared by the package."""


class ContractViolation(ValueError):
    """An operation was called outside its documented preconditions."""


class SchemaError(ValueError):
    """A JSON document does not match the expected layout."""
