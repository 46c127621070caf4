"""
Phase result type.
"""
from dataclasses import dataclass, field
from typing import Dict, Literal, Optional


PhaseMethod = Literal[
    "closed_form",     # Analytic formula in the triangle parameters
    "operator_cycle",  # Product of the three leg evolutions applied to vertex 1
    "bargmann",        # Argument of the three-vertex overlap product
]


@dataclass(frozen=True)
class PhaseResult:
    """
    Geometric phase of one triangle by one method.

    ``residual`` is the closure defect ||psi4 - e^{-i phi_g} psi1|| for the
    operator cycle and 0 for the other methods.
    """
    phi_g: float
    method: PhaseMethod
    residual: float = 0.0
    group_dim: Optional[int] = None

    def to_dict(self) -> Dict:
        result = {
            "method": self.method,
            "phi_g": self.phi_g,
            "residual": self.residual,
        }
        if self.group_dim is not None:
            result["group_dim"] = self.group_dim
        return result


def create_phase_result(phi_g: float, method: PhaseMethod, residual: float = 0.0,
                        group_dim: Optional[int] = None) -> PhaseResult:
    """Factory function to create a PhaseResult."""
    return PhaseResult(phi_g=float(phi_g), method=method, residual=float(residual), group_dim=group_dim)


@dataclass
class PhaseComparison:
    """All applicable methods evaluated on one triangle."""
    results: Dict[str, PhaseResult]
    errors: Dict[str, str]
    max_disagreement: float
    error_codes: Dict[str, str] = field(default_factory=dict)

    @property
    def complete(self) -> bool:
        return not self.errors

    def phase(self, method: PhaseMethod) -> float:
        """Phase by one method, NaN if that method failed."""
        result = self.results.get(method)
        return result.phi_g if result is not None else float('nan')

    def to_dict(self) -> Dict:
        return {
            "results": {name: result.to_dict() for name, result in self.results.items()},
            "errors": dict(self.errors),
            "error_codes": dict(self.error_codes),
            "max_disagreement": self.max_disagreement,
        }
