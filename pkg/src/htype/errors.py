"""Exception types raised across the package."""


class HTypeError(Exception):
    """Base class for all errors raised by :mod:`htype`."""


class AdmissibilityError(HTypeError, ValueError):
    def __init__(self, n, m, rho):
        self.n, self.m, self.rho = n, m, rho
        super().__init__(
            f"no Clifford module: m={m} generators need m < rho(n)={rho} (n={n})")


class DimensionMismatch(HTypeError, ValueError):
    pass


class InvalidSignature(HTypeError, ValueError):
    pass


class InvalidGenerators(HTypeError, ValueError):
    def __init__(self, report):
        self.report = report
        failed = ", ".join(c.name for c in report.checks if not c.passed)
        super().__init__(f"generator set violates: {failed}")


class IndexOutOfRange(HTypeError, IndexError):
    pass


class ZeroCenterVelocity(HTypeError, ValueError):
    def __init__(self, msg="vertical vector u is zero; A = eta j(u) vanishes"):
        super().__init__(msg)


class SizeLimitExceeded(HTypeError, ValueError):
    pass


class NotSkewSymmetric(HTypeError, ValueError):
    pass


class NonUniformGrid(HTypeError, ValueError):
    pass


class InvalidRange(HTypeError, ValueError):
    pass
