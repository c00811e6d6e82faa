"""Ошибки предметной области. Всё, что вызвано входными данными, наследует AdelabError."""


class AdelabError(ValueError):
    """Базовый класс: HTTP отвечает 400, CLI завершается с кодом 2."""


class InvalidInput(AdelabError):
    pass


class DenominatorNotUnit(AdelabError):
    def __init__(self, value, p: int):
        self.value = value
        self.p = p
        super().__init__(f"denominator of {value} is divisible by {p}")


class DivisionByZeroPoly(AdelabError):
    pass


class ZeroLeadingCoefficient(AdelabError):
    pass


class EmptyScan(AdelabError):
    pass


class SingularPoint(AdelabError):
    pass


class PreconditionFailed(AdelabError):
    pass


class NotOnCurve(AdelabError):
    pass


class SingularBranch(AdelabError):
    pass


class UnknownName(AdelabError):
    pass


class NotIdempotent(AdelabError):
    pass


class BadLinearPart(AdelabError):
    pass


class InsufficientPrecision(AdelabError):
    pass


class SingularStep(AdelabError):
    def __init__(self, step: int, message: str = ""):
        self.step = step
        super().__init__(message or f"linear system at order {step} is singular")


class BadCharacteristic(AdelabError):
    pass


class SingularCurve(AdelabError):
    pass


class NotIntegralK(AdelabError):
    pass


class BetaOutOfRange(AdelabError):
    pass


class NewtonDivergence(AdelabError):
    pass


class UnknownTable(AdelabError):
    pass


class RingMismatch(RuntimeError):
    """Смешение колец коэффициентов (Q и Z/p^k, разные модули). Ошибка программиста."""
