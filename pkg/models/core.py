"""
Core result models for amice-kit.

Ring values and norms are kept as library objects and rendered with ``str`` in
``to_dict`` so JSON output carries exact rational strings (``"inf"`` for an
infinite norm). Counts and indices stay integers.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple


def _text(value: Any) -> Optional[str]:
    return None if value is None else str(value)


@dataclass
class AxiomViolation:
    """One failed instance of an axiom."""
    axiom: str
    elements: Tuple[str, ...]
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {'axiom': self.axiom, 'elements': list(self.elements), 'detail': self.detail}


@dataclass
class AxiomReport:
    """Outcome of checking norm or morphism axioms on a sample set."""
    model: str
    sample_count: int
    violations: List[AxiomViolation] = field(default_factory=list)
    skipped: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            'model': self.model,
            'sample_count': self.sample_count,
            'passed': self.passed,
            'violations': [v.to_dict() for v in self.violations],
            'skipped': list(self.skipped),
        }


@dataclass
class MemberReport:
    """Membership verdict for a sequence in lambda or kappa."""
    verdict: str  # 'member', 'non-member', 'undecidable'
    space: str
    witness: Optional[int] = None
    row_norms: List[Any] = field(default_factory=list)
    evidence: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict,
            'space': self.space,
            'witness': self.witness,
            'row_norms': [_text(n) for n in self.row_norms],
            'evidence': self.evidence,
        }


@dataclass
class BoundReport:
    """A computed quantity checked against a claimed bound."""
    name: str
    value: Any
    bound: Any
    holds: bool
    equality: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'value': _text(self.value),
            'bound': _text(self.bound),
            'holds': self.holds,
            'equality': self.equality,
        }


@dataclass
class HopfAxiomReport:
    """Pass/fail per Hopf axiom with the first offending coefficient."""
    model: str
    order: int
    results: Dict[str, str] = field(default_factory=dict)
    failures: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(result == 'pass' for result in self.results.values())

    def record(self, axiom: str, failure: Optional[str]):
        self.results[axiom] = 'pass' if failure is None else 'fail'
        if failure is not None:
            self.failures[axiom] = failure

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = dict(self.results)
        if self.failures:
            payload['failures'] = dict(self.failures)
        return payload


@dataclass
class MahlerMembershipReport:
    """Classification of a Mahler series: polynomial, certified radius, or undecided."""
    verdict: str  # 'polynomial', 'certified', 'undecidable'
    degree: Optional[int] = None
    radius: Any = None
    exact_radius: bool = False
    detail: str = ''

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verdict': self.verdict,
            'degree': self.degree,
            'radius': _text(self.radius),
            'exact_radius': self.exact_radius,
            'detail': self.detail,
        }


@dataclass
class PairingValue:
    """Value of the duality pairing with a certified error bound (0 when exact)."""
    value: Any
    error_bound: Any
    exact: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'value': _text(self.value),
            'error_bound': _text(self.error_bound),
            'exact': self.exact,
        }


@dataclass
class BaseChangeReport:
    """Both sides of the pairing/base-change square."""
    morphism: str
    mapped_pairing: Any
    paired_images: Any
    commutes: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'morphism': self.morphism,
            'mapped_pairing': _text(self.mapped_pairing),
            'paired_images': _text(self.paired_images),
            'commutes': self.commutes,
        }
