"""Handler for the ``norm`` command."""

from argparse import Namespace
from fractions import Fraction
from typing import Any, Dict

from algebra.series import BasisTag, bs_norm, ps_norm
from handlers.base_handler import BaseCommandHandler
from models.schemas import SeriesSpec, parse_rational
from utils.error_handling import DomainError, SchemaError


class NormHandler(BaseCommandHandler):
    """Power series norm for monomial input, binomial series norm for Mahler input."""

    command_name = 'norm'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        spec = self.load(SeriesSpec, args.series, 'series')
        self.check_order(spec.order)
        try:
            rho = Fraction(parse_rational(args.rho))
        except ValueError as e:
            raise SchemaError(f"rho: {e}", field='rho')
        if rho <= 0:
            raise SchemaError("rho must be positive", field='rho')
        series = spec.to_series()
        if series.basis is BasisTag.MONOMIAL:
            grading, value = 'ps', ps_norm(series, rho)
        elif series.basis is BasisTag.MAHLER:
            grading, value = 'bs', bs_norm(series, rho)
        else:
            raise DomainError(f"no norm defined for the {series.basis.value} basis", field='basis')
        return {'grading': grading, 'rho': str(rho), 'norm': str(value)}
