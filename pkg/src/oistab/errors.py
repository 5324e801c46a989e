class ResourceCapError(RuntimeError):
    """A computation was refused because it would exceed a size cap."""

    def __init__(self, message, size=None, cap=None):
        super().__init__(message)
        self.size = size
        self.cap = cap
