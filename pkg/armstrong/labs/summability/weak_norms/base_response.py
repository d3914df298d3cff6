import math

import numpy as np

from ..spaces import Functional

CERTIFICATE_SLACK = 1e-9


class WeakNormResult(object):
    """
    The value of a weak norm together with the dual functional that
    attains it. `exact` is True only for closed-form paths; search
    results are lower bounds.

    """
    def __init__(self, value, certificate, exact=False, backend=None):
        self.value = float(value)
        self.certificate = certificate
        self._exact = bool(exact)
        self.backend = backend

    def __eq__(self, other):
        try:
            return (self.value == other.value and
                    self._exact == other._exact and
                    np.array_equal(self.certificate.coords,
                                   other.certificate.coords))
        except AttributeError:
            return False

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        return "WeakNormResult(%r, exact=%s, backend=%s)" \
            % (self.value, self._exact, self.backend)

    def is_exact(self):
        return self._exact

    def evaluate_certificate(self, family, q):
        from . import objective_values
        return float(objective_values(family.matrix, self.certificate.coords, q)[0])

    def is_valid(self, family, q):
        """The certificate lies in the dual ball and reproduces the value"""

        if not isinstance(self.certificate, Functional):
            return False
        if not (math.isfinite(self.value) and self.value >= 0):
            return False
        if self.certificate.dual_norm() > 1 + CERTIFICATE_SLACK:
            return False
        achieved = self.evaluate_certificate(family, q)
        return abs(achieved - self.value) <= \
            CERTIFICATE_SLACK * max(1.0, abs(self.value))

    def to_json(self):
        return {
            'value': self.value,
            'exact': self._exact,
            'backend': self.backend,
            'certificate': self.certificate.coords.tolist(),
        }
