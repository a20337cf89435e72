"""
Error types shared by every analysis module
"""
from typing import List, Optional


class ExflowError(ValueError):
    """Base class for analysis errors; `reason` is the stable tag used in CLI JSON"""
    reason = "ExflowError"

    def to_dict(self) -> dict:
        return {"error": self.reason, "message": str(self)}


class EmptySpace(ExflowError):
    reason = "EmptySpace"


class NotASubset(ExflowError):
    reason = "NotASubset"


class NotOpen(ExflowError):
    reason = "NotOpen"


class NotSaturated(ExflowError):
    reason = "NotSaturated"


class NotATopCell(ExflowError):
    reason = "NotATopCell"


class InvalidTower(ExflowError):
    reason = "InvalidTower"

    def __init__(self, diagnostics: List[str]):
        super().__init__("; ".join(diagnostics))
        self.diagnostics = list(diagnostics)


class InsufficientHorizon(ExflowError):
    reason = "InsufficientHorizon"

    def __init__(self, level: int, message: Optional[str] = None):
        super().__init__(message or f"walk never settles in level {level}")
        self.level = level

    def to_dict(self) -> dict:
        data = super().to_dict()
        data["level"] = self.level
        return data


class NonFinite(ExflowError):
    reason = "NonFinite"


class DegenerateGrid(ExflowError):
    reason = "DegenerateGrid"


class UnknownFixture(ExflowError):
    reason = "UnknownFixture"


class ConfigError(ExflowError):
    reason = "ConfigError"

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
