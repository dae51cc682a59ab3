"""Exception hierarchy shared by every module.

Each exception carries a stable ``code`` string; the CLI reports it verbatim
in its structured error JSON.
"""


class NWError(Exception):
    code = "error"

    def to_json(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DivisorVanishes(NWError, ZeroDivisionError):
    code = "divisor_vanishes"


class OrderMismatch(NWError, ValueError):
    code = "order_mismatch"


class TruncationTooShort(NWError, ValueError):
    code = "truncation_too_short"


class ArityMismatch(NWError, ValueError):
    code = "arity_mismatch"


class DegreeRaisingField(NWError, ValueError):
    code = "degree_raising_field"


class NotUnderdetermined(NWError, ValueError):
    code = "not_underdetermined"


class IndeterminateOrder(NWError, ValueError):
    code = "indeterminate_order"


class TailBoundFailure(NWError, ArithmeticError):
    code = "tail_bound_failure"


class OutsideDisk(NWError, ValueError):
    code = "outside_disk"


class NotUnimodular(NWError, ValueError):
    code = "not_unimodular"


class ReduciblePolynomial(NWError, ValueError):
    code = "reducible_polynomial"


class NoRealRoot(NWError, ValueError):
    code = "no_real_root"


class PoleProximity(NWError, ValueError):
    code = "pole_proximity"


class Degenerate(NWError, ValueError):
    code = "degenerate_curve"


class PrecisionExhausted(NWError, ArithmeticError):
    code = "precision_exhausted"


class ParseError(NWError, ValueError):
    code = "parse_error"


class EnvelopeViolation(NWError, AssertionError):
    """A determinate order exceeded the empirical zero-lemma envelope."""

    code = "envelope_violation"
