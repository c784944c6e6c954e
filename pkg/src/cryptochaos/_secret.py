class SecretBytes:
    """Fixed-length secret held in a mutable buffer so it can be wiped.

    Subclasses set ``size``. ``repr`` never shows the contents.
    """

    size = 32

    def __init__(self, data):
        data = bytes(data)
        if len(data) != self.size:
            from .errors import InvalidInputError

            raise InvalidInputError(
                f"{type(self).__name__} needs {self.size} bytes, got {len(data)}"
            )
        self._buf = bytearray(data)

    def __bytes__(self):
        return bytes(self._buf)

    def __len__(self):
        return len(self._buf)

    def __eq__(self, other):
        if isinstance(other, SecretBytes):
            return type(self) is type(other) and self._buf == other._buf
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, bytes(self._buf)))

    def __repr__(self):
        return f"<{type(self).__name__} [{self.size} bytes redacted]>"

    def wipe(self):
        for i in range(len(self._buf)):
            self._buf[i] = 0

    @property
    def wiped(self):
        return not any(self._buf)
