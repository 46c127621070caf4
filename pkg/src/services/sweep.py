"""
Parameter sweeps: evaluate all phase methods along one parameter and
assemble CSV rows in step order.
"""
import io
import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

from tqdm import tqdm

from src.types.geodesic import triangle_params_from_dict
from src.types.sweep import CSV_HEADER, SweepRow, SweepSpec
from src.services.phase import CLOSURE_TOLERANCE, compare_methods
from src.utils.error_handler import GeoPhaseError
from src.utils.serialization import format_machine


NAN = float('nan')


def evaluate_point(params: Dict[str, float], value: float,
                   closure_tolerance: float = CLOSURE_TOLERANCE) -> SweepRow:
    """
    All phase methods at one parameter set; failures become NaN fields.
    """
    try:
        triangle_params = triangle_params_from_dict(params)
        comparison = compare_methods(triangle_params, allow_degenerate=True,
                                     closure_tolerance=closure_tolerance)
    except GeoPhaseError as e:
        return SweepRow(value, NAN, NAN, NAN, NAN, {'params': e.message})

    operator = comparison.results.get('operator_cycle')
    return SweepRow(
        param=value,
        phi_closed=comparison.phase('closed_form'),
        phi_operator=comparison.phase('operator_cycle'),
        phi_bargmann=comparison.phase('bargmann'),
        residual=operator.residual if operator is not None else NAN,
        errors=dict(comparison.errors),
    )


class SweepService:
    """Runs sweeps on a thread pool; results always come back in step order."""

    def __init__(self, max_workers: int = 4, progress: bool = True,
                 closure_tolerance: float = CLOSURE_TOLERANCE):
        self.max_workers = max(1, int(max_workers))
        self.progress = progress
        self.closure_tolerance = closure_tolerance

    def run(self, spec: SweepSpec) -> List[SweepRow]:
        values = spec.values()
        logging.info(f"Sweeping {spec.parameter} over [{spec.start}, {spec.stop}] "
                     f"in {spec.steps} steps with {self.max_workers} workers")

        def task(value: float) -> SweepRow:
            return evaluate_point(spec.point(value), value, self.closure_tolerance)

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            # executor.map yields in submission order regardless of completion order
            rows = list(tqdm(executor.map(task, values), total=len(values),
                             desc=f"sweep {spec.parameter}", disable=not self.progress,
                             leave=False))

        degenerate = self.degenerate_count(rows)
        if degenerate:
            logging.warning(f"{degenerate} of {len(rows)} sweep rows have undefined phases (written as nan)")
        return rows

    @staticmethod
    def degenerate_count(rows: List[SweepRow]) -> int:
        return sum(1 for row in rows if row.degenerate)


def rows_to_csv(rows: List[SweepRow]) -> str:
    """CSV text with a fixed header and 17-digit floats."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow([
            format_machine(row.param),
            format_machine(row.phi_closed),
            format_machine(row.phi_operator),
            format_machine(row.phi_bargmann),
            format_machine(row.residual),
        ])
    return buffer.getvalue()


def run_sweep(spec: SweepSpec, max_workers: int = 4, progress: bool = False,
              closure_tolerance: Optional[float] = None) -> List[SweepRow]:
    """Convenience wrapper around SweepService.run."""
    service = SweepService(max_workers, progress,
                           CLOSURE_TOLERANCE if closure_tolerance is None else closure_tolerance)
    return service.run(spec)
