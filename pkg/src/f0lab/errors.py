class InputError(ValueError):
    """Invalid user input (bad dimension, malformed file, violated precondition)."""


class ModelFileError(InputError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class GoldenFileError(InputError):
    pass
