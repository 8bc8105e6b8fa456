"""Handlers for the distribution commands."""

from argparse import Namespace
from fractions import Fraction
from typing import Any, Dict

from algebra.amice import (
    amice_transform, base_change_commutes, base_change_series, bernoulli, dirac,
    kubota_leopoldt, pairing, power_moment,
)
from algebra.coefficients import parse_model, parse_morphism
from handlers.base_handler import BaseCommandHandler
from models.schemas import MomentsSpec, SeriesSpec, parse_rational
from utils.error_handling import DomainError, SchemaError


def _model_option(text: str):
    try:
        return parse_model(text)
    except DomainError as e:
        raise SchemaError(f"model: {e.message}", field='model')


class PairingHandler(BaseCommandHandler):
    """``<xi, f>`` for a series-side file and a Mahler file."""

    command_name = 'pairing'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        xi_spec = self.load(SeriesSpec, args.xi, 'xi')
        f_spec = self.load(SeriesSpec, args.f, 'f')
        self.check_order(xi_spec.order)
        self.check_order(f_spec.order)
        xi, f = xi_spec.to_series(), f_spec.to_series()
        result = pairing(xi, f)
        payload = result.to_dict()
        payload['value'] = xi.model.format(result.value)
        return payload


class AmiceHandler(BaseCommandHandler):
    """Amice transform of a moments file, a Dirac mass, or the Kubota-Leopoldt distribution."""

    command_name = 'amice'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        if args.moments is not None:
            spec = self.load(MomentsSpec, args.moments, 'moments')
            self.check_order(len(spec.moments), 'moments')
            tail = spec.tail.to_tail() if spec.tail is not None else None
            mu = amice_transform(spec.ring_values(), spec.coefficient_model(), tail,
                                 spec.finite_support)
            return mu.to_dict()

        order = self.check_order(args.order)
        model = _model_option(args.model)
        if args.dirac is not None:
            try:
                point = Fraction(parse_rational(args.dirac))
            except ValueError as e:
                raise SchemaError(f"dirac: {e}", field='dirac')
            return dirac(point, order, model).to_dict()
        return kubota_leopoldt(order, model).to_dict()


class MomentsHandler(BaseCommandHandler):
    """Power moments ``integral of x**k`` for ``k <= n``."""

    command_name = 'moments'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        spec = self.load(MomentsSpec, args.moments, 'moments')
        n = self.check_order(args.n, 'n')
        model = spec.coefficient_model()
        mu = amice_transform(spec.ring_values(), model, None, spec.finite_support)
        return {'model': model.name,
                'power_moments': [model.format(power_moment(mu, k)) for k in range(n + 1)]}


class BernoulliHandler(BaseCommandHandler):
    """Bernoulli numbers as Kubota-Leopoldt power moments."""

    command_name = 'bernoulli'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        n = self.check_order(args.n, 'n')
        return {'n': n, 'B': str(bernoulli(n))}


class BaseChangeHandler(BaseCommandHandler):
    """Map a series along a ring morphism; with ``--pair-with`` also check commutation."""

    command_name = 'base-change'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        try:
            morphism = parse_morphism(args.morphism)
        except DomainError as e:
            raise SchemaError(f"morphism: {e.message}", field='morphism')
        spec = self.load(SeriesSpec, args.series, 'series')
        self.check_order(spec.order)
        series = spec.to_series()
        payload: Dict[str, Any] = {'morphism': str(morphism),
                                   'series': base_change_series(series, morphism).to_dict()}
        if args.pair_with is not None:
            other = self.load(SeriesSpec, args.pair_with, 'pair-with')
            self.check_order(other.order)
            payload['check'] = base_change_commutes(series, other.to_series(), morphism).to_dict()
        return payload
