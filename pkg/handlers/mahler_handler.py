"""Handlers for finite-difference commands: ``mahler-expand`` and ``evaluate``."""

from argparse import Namespace
from fractions import Fraction
from typing import Any, Dict

from algebra.coefficients import PadicElement
from algebra.hopf import mahler_antipode
from algebra.mahler import FunctionTable, classify_membership, evaluate, mahler_expand, padic_evaluate
from handlers.base_handler import BaseCommandHandler
from models.schemas import SeriesSpec, TableSpec, parse_rational
from utils.error_handling import SchemaError


class MahlerExpandHandler(BaseCommandHandler):
    """Mahler coefficients of a function table."""

    command_name = 'mahler-expand'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        spec = self.load(TableSpec, args.table, 'table')
        self.check_order(len(spec.values), 'values')
        table = FunctionTable(spec.coefficient_model(), tuple(spec.ring_values()))
        series = mahler_expand(table)
        payload = series.to_dict()
        payload['classification'] = classify_membership(series).to_dict()
        return payload


class EvaluateHandler(BaseCommandHandler):
    """Value of a Mahler series at an integer, or at a p-adic point with ``--padic``."""

    command_name = 'evaluate'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        spec = self.load(SeriesSpec, args.series, 'series')
        self.check_order(spec.order)
        series = spec.to_series()
        model = series.model

        if args.padic is not None:
            try:
                point = Fraction(parse_rational(args.padic))
            except ValueError as e:
                raise SchemaError(f"padic: {e}", field='padic')
            precision = self.check_order(args.precision, 'precision')
            value = padic_evaluate(series, point, precision)
            return {'at': str(point), 'value': str(value),
                    'absolute_precision': value.absolute_precision}

        if args.at >= 0:
            value = evaluate(series, args.at)
        else:
            value = mahler_antipode(series, [-args.at])[0]
        text = str(value) if isinstance(value, PadicElement) else model.format(value)
        return {'at': args.at, 'value': text}
