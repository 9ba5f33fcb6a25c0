class FrontendError(Exception):
    pass


class DSLSyntaxError(FrontendError):
    def __init__(self, message, line, col, path=None):
        self.message, self.line, self.col, self.path = message, line, col, path
        where = f"{path}:" if path else ""
        super().__init__(f"{where}{line}:{col}: {message}")


class UnresolvedReference(FrontendError):
    def __init__(self, kind, name, where=None):
        self.kind, self.name = kind, name
        suffix = f" in {where}" if where else ""
        super().__init__(f"unresolved {kind} {name!r}{suffix}")


class DuplicateName(FrontendError):
    def __init__(self, kind, name):
        self.kind, self.name = kind, name
        super().__init__(f"{kind} {name!r} declared twice")


class IncludeError(FrontendError):
    pass
