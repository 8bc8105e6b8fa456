"""Handlers for the weight matrix commands: nuclearity and membership."""

from argparse import Namespace
from typing import Any, Dict

from algebra.series import certified_coeffs
from algebra.weights import is_nuclear_matrix, membership
from handlers.base_handler import BaseCommandHandler
from models.schemas import SeriesSpec, WeightMatrixSpec


class NuclearityHandler(BaseCommandHandler):
    """Decide whether every consecutive inclusion of a weight matrix is nuclear."""

    command_name = 'nuclearity'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        matrix = self.load(WeightMatrixSpec, args.matrix, 'matrix').to_matrix()
        for warning in matrix.check_domination().warnings:
            self.logger.warning(warning)
        return {'nuclear': is_nuclear_matrix(matrix), 'rows': len(matrix.rows)}


class MembershipHandler(BaseCommandHandler):
    """Classify a series against lambda or kappa of a weight matrix."""

    command_name = 'membership'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        matrix = self.load(WeightMatrixSpec, args.matrix, 'matrix').to_matrix()
        spec = self.load(SeriesSpec, args.series, 'series')
        self.check_order(spec.order)
        series = spec.to_series()
        coeffs, tail = certified_coeffs(series)
        report = membership(coeffs, tail, matrix, args.space, series.model, args.test)
        return report.to_dict()
