class InputError(ValueError):
    """Malformed or out-of-domain input data."""
