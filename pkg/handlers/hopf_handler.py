"""Handler for ``hopf-verify``."""

from argparse import Namespace
from typing import Any, Dict

from algebra.coefficients import parse_model
from algebra.hopf import verify_hopf_axioms
from handlers.base_handler import BaseCommandHandler
from utils.error_handling import DomainError, SchemaError


class HopfVerifyHandler(BaseCommandHandler):
    """Check coassociativity, counit and antipode laws at a truncation order."""

    command_name = 'hopf-verify'

    def execute(self, args: Namespace) -> Dict[str, Any]:
        try:
            model = parse_model(args.model)
        except DomainError as e:
            raise SchemaError(f"model: {e.message}", field='model')
        order = self.check_order(args.order)
        return verify_hopf_axioms(model, order).to_dict()
