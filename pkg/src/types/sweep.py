"""
Parameter sweep types.
"""
import math
from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional

import numpy as np

from src.utils.error_handler import InvalidParameterError, validate_finite


SweepParameter = Literal["s1", "s2", "alpha", "beta", "beta1", "beta2", "beta3"]
GroupName = Literal["su3", "su4"]

GROUP_PARAMETERS: Dict[str, tuple] = {
    "su3": ("s1", "s2", "alpha", "beta"),
    "su4": ("s1", "s2", "alpha", "beta1", "beta2", "beta3"),
}

CSV_HEADER = "param,phi_closed,phi_operator,phi_bargmann,residual"


@dataclass(frozen=True)
class SweepSpec:
    """
    One parameter stepped evenly from start to stop (both included) with
    every other triangle parameter held at its fixed value.
    """
    group: GroupName
    parameter: SweepParameter
    start: float
    stop: float
    steps: int
    fixed: Dict[str, float] = field(default_factory=dict)

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.steps)]

    def point(self, value: float) -> Dict[str, float]:
        """Full parameter set for one step."""
        params = dict(self.fixed)
        params[self.parameter] = value
        return params

    def to_dict(self) -> Dict:
        return {
            "group": self.group,
            "parameter": self.parameter,
            "start": self.start,
            "stop": self.stop,
            "steps": self.steps,
            "fixed": dict(self.fixed),
        }


@dataclass(frozen=True)
class SweepRow:
    param: float
    phi_closed: float
    phi_operator: float
    phi_bargmann: float
    residual: float
    errors: Dict[str, str] = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return bool(self.errors)

    def to_dict(self) -> Dict:
        return {
            "param": self.param,
            "phi_closed": self.phi_closed,
            "phi_operator": self.phi_operator,
            "phi_bargmann": self.phi_bargmann,
            "residual": self.residual,
            "errors": dict(self.errors),
        }


def create_sweep_spec(group: str, parameter: str, start: float, stop: float, steps: int,
                      fixed: Optional[Dict[str, float]] = None) -> SweepSpec:
    """
    Factory function to create a validated SweepSpec.

    Raises:
        InvalidParameterError: If the parameter does not belong to the group,
            steps < 2, start == stop, or a fixed value is missing
    """
    if group not in GROUP_PARAMETERS:
        raise InvalidParameterError(f"Unknown group {group!r}; expected su3 or su4", field='group')
    names = GROUP_PARAMETERS[group]
    if parameter not in names:
        raise InvalidParameterError(
            f"Cannot sweep {parameter!r} for {group}; choose one of {', '.join(names)}",
            field='parameter'
        )
    start = validate_finite(start, 'start')
    stop = validate_finite(stop, 'stop')
    if isinstance(steps, bool) or not isinstance(steps, int) or steps < 2:
        raise InvalidParameterError(f"steps must be an integer >= 2, got {steps!r}", field='steps')
    if math.isclose(start, stop, rel_tol=0.0, abs_tol=0.0):
        raise InvalidParameterError("start and stop must differ", field='stop')

    fixed = {k: validate_finite(v, k) for k, v in (fixed or {}).items() if k in names and k != parameter}
    missing = [k for k in names if k != parameter and k not in fixed]
    if missing:
        raise InvalidParameterError(
            f"Missing fixed values for {', '.join(missing)}",
            field=missing[0],
            details={'missing': missing}
        )
    return SweepSpec(group, parameter, start, stop, steps, fixed)
