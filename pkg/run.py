#!/usr/bin/env python3
"""
Geometric Phase Runner

Computes the geometric phase of geodesic triangles on SU(3)/U(2) and
SU(4)/U(3), factors special unitaries into two-channel elements, builds and
simulates the corresponding interferometers, and sweeps triangle parameters.

Usage:
    python run.py phase --group su3 --s1 0.7 --s2 0.9 --alpha 1.2 --beta 0.4
    python run.py decompose matrix.txt --pattern su4
    python run.py circuit --group su3 --s1 0.7 --s2 0.9 --alpha 1.2 --beta 0.4 --out results/circuit.json
    python run.py sweep --group su3 --param alpha --start -3.14159 --stop 3.14159 --steps 65 \
        --s1 1.5707963267948966 --s2 1.5707963267948966 --beta 0 --out results/sweep.csv
    python run.py simulate --netlist results/circuit.json --input 1,0,0
"""

import sys
import json
import math
import time
import argparse
import logging
from typing import Any, Dict, List, Optional

from src.types.geodesic import TriangleParams, TriangleParamsSU4, triangle_params_from_dict
from src.types.sweep import GROUP_PARAMETERS, create_sweep_spec
from src.types.unitary import create_state
from src.services.circuit import (
    build_su3_circuit, build_su4_circuit, circuit_report, simulate_single_photon,
    simulate_two_channel_multiphoton,
)
from src.services.geodesics import is_geodesic, triangle_su3, triangle_su4
from src.services.decompose import decompose, element_count, round_trip_residual
from src.services.phase import compare_methods
from src.services.sweep import SweepService, rows_to_csv
from src.utils.audit import AuditLogger
from src.utils.config import load_config, log_runtime_config
from src.utils.error_handler import (
    GeoPhaseError, InvalidParameterError, describe_error, exit_code_for,
)
from src.utils.matrix_io import parse_state, read_matrix
from src.utils.serialization import (
    chain_to_json, circuit_from_json, circuit_to_json, format_human, format_machine,
    read_text, write_text,
)


ANGLE_FLAGS = ('s1', 's2', 'alpha', 'beta', 'beta1', 'beta2', 'beta3',
               'path_s1', 'path_s2', 'path_s3', 'start', 'stop')

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


class PhaseRunner:
    """Command runner: owns the configuration, logging and audit trail."""

    def __init__(self, config_file: str = "config.yml", tolerance: Optional[float] = None):
        self.config = load_config(config_file)
        self.tolerance = tolerance
        self.setup_logging()
        self.audit = AuditLogger(self.config['output_dir']) if self.config['audit'] else None

    def setup_logging(self):
        """Log to stderr (and optionally a file); stdout stays reserved for results."""
        log_level = getattr(logging, str(self.config.get('log_level', 'INFO')).upper(), logging.INFO)
        handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
        log_file = self.config.get('log_file')
        if log_file:
            handlers.append(logging.FileHandler(log_file))

        logging.basicConfig(
            level=log_level,
            format='%(asctime)s - %(levelname)s - %(message)s',
            handlers=handlers,
            force=True,
        )
        self.logger = logging.getLogger(__name__)

    def _tolerance(self, key: str) -> float:
        return self.tolerance if self.tolerance is not None else self.config[key]

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------

    def cmd_phase(self, params: Dict[str, float], output_format: str = 'text') -> int:
        """Print the phase by every method; exit 0 iff all methods agree."""
        triangle_params = triangle_params_from_dict(params)
        comparison = compare_methods(triangle_params, allow_degenerate=True,
                                     closure_tolerance=self.config['closure_tolerance'])
        tolerance = self._tolerance('agreement_tolerance')
        geodesic_deviation = self._geodesic_deviation(triangle_params)
        self._residuals = {'geodesic_deviation': geodesic_deviation}

        if output_format == 'json':
            document = {"params": triangle_params.to_dict(), **comparison.to_dict(),
                        "geodesic_deviation": geodesic_deviation}
            print(json.dumps(document, indent=2))
        elif output_format == 'csv':
            print("method,phi_g,residual")
            for method in ('closed_form', 'operator_cycle', 'bargmann'):
                result = comparison.results.get(method)
                print(f"{method},{format_machine(comparison.phase(method))},"
                      f"{format_machine(result.residual if result else float('nan'))}")
        else:
            group = "SU(4)" if 'beta1' in params else "SU(3)"
            print(f"\n=== GEOMETRIC PHASE ({group}) ===")
            print("Parameters: " + ", ".join(f"{k}={format_human(v)}"
                                            for k, v in triangle_params.to_dict().items()))
            for method in ('closed_form', 'operator_cycle', 'bargmann'):
                result = comparison.results.get(method)
                if result is None:
                    print(f"{method:<15} undefined: {comparison.errors.get(method, '')}")
                else:
                    print(f"{method:<15} phi_g = {format_human(result.phi_g):>12}   "
                          f"residual = {format_human(result.residual)}")
            print(f"Max disagreement: {format_human(comparison.max_disagreement)}")
            print(f"Geodesic deviation: {format_human(geodesic_deviation)}")

        if any(code == 'INCONSISTENT_CYCLE' for code in comparison.error_codes.values()):
            return EXIT_NUMERICAL
        if comparison.errors:
            self.logger.warning(f"Degenerate triangle: {comparison.errors}")
            return EXIT_VALIDATION
        if geodesic_deviation is not None and geodesic_deviation > self.config['geodesic_tolerance']:
            self.logger.error(f"A leg leaves its geodesic by {geodesic_deviation:.3e}")
            return EXIT_NUMERICAL
        if comparison.max_disagreement > tolerance:
            self.logger.error(f"Methods disagree by {comparison.max_disagreement:.3e} > {tolerance:.1e}")
            return EXIT_NUMERICAL
        return EXIT_OK

    def _geodesic_deviation(self, p: TriangleParams) -> Optional[float]:
        """Largest deviation of a leg from its geodesic at the configured sample count."""
        builder = triangle_su4 if isinstance(p, TriangleParamsSU4) else triangle_su3
        try:
            triangle = builder(p, allow_degenerate=True)
        except GeoPhaseError as e:
            self.logger.debug(f"No geodesy check: {e.message}")
            return None
        samples = self.config['geodesic_samples']
        tolerance = self.config['geodesic_tolerance']
        return max(is_geodesic(leg, samples, tolerance)[1] for leg in triangle.legs)

    def cmd_decompose(self, matrix_file: str, pattern: str = 'auto', order: str = 'columns',
                      out: Optional[str] = None, output_format: str = 'json') -> int:
        """Emit the factor chain; exit 0 iff the round trip is within tolerance."""
        u = read_matrix(matrix_file, special=True, tolerance=self.config['unitary_tolerance'])
        chain = decompose(u, pattern, order, tolerance=self.config['unitary_tolerance'])
        residual = round_trip_residual(u, chain)
        tolerance = self._tolerance('decompose_tolerance')

        document = chain_to_json(chain)
        if out:
            write_text(out, document)
            self.logger.info(f"Chain written to {out}")
        if output_format == 'text':
            counts = element_count(chain)
            print(f"\n=== DECOMPOSITION (N={chain.n}, {counts.total} factors) ===")
            for index, factor in enumerate(chain.factors, start=1):
                params = ", ".join(format_human(p) for p in factor.params)
                print(f"{index:>3}. ({factor.pair.i},{factor.pair.j}) {factor.kind:<13} [{params}]")
            for (i, j), count in sorted(counts.by_pair.items()):
                print(f"pair ({i},{j}): {count}")
        else:
            sys.stdout.write(document)

        print(f"residual: {residual:.3e}", file=sys.stderr)
        self._residuals = {'round_trip': residual}
        return EXIT_OK if residual <= tolerance else EXIT_NUMERICAL

    def cmd_circuit(self, params: Dict[str, float], path: Dict[str, Optional[float]],
                    out: Optional[str] = None, output_format: str = 'text') -> int:
        """Build the interferometer, optionally write its netlist, and simulate port 1."""
        triangle_params = triangle_params_from_dict(params)
        if 'beta1' in params:
            circuit = build_su4_circuit(triangle_params, path.get('s1'), path.get('s2'), path.get('s3'))
        else:
            circuit = build_su3_circuit(triangle_params, path.get('s1'), path.get('s2'), path.get('s3'),
                                        omega2_sign=self.config['omega2_sign'])
        if out:
            write_text(out, circuit_to_json(circuit))
            self.logger.info(f"Netlist with {len(circuit)} elements written to {out}")

        report = circuit_report(circuit)
        report['notes'] = circuit.notes
        self._residuals = {'closure': report.get('closure_residual')}

        if output_format == 'json':
            print(json.dumps(report, indent=2, default=str))
        else:
            print(f"\n=== CIRCUIT (N={circuit.n}, {len(circuit)} elements) ===")
            for index, element in enumerate(circuit.elements, start=1):
                params_text = ", ".join(format_human(p) for p in element.params.to_list())
                print(f"{index:>3}. {element.label:<16} ({element.pair.i},{element.pair.j}) [{params_text}]")
            print("Output amplitudes (input port 1):")
            for port, (re, im) in zip(circuit.output_ports, report['output']):
                print(f"  {port}: {format_human(re)} {'+' if im >= 0 else '-'} {format_human(abs(im))}i")
            if report['phi_g'] is None:
                print(f"phi_g: undefined ({report.get('error')})")
            else:
                print(f"phi_g: {format_human(report['phi_g'])}   "
                      f"closure residual: {format_human(report['closure_residual'])}")
        return EXIT_OK

    def cmd_sweep(self, group: str, parameter: str, start: float, stop: float, steps: int,
                  fixed: Dict[str, float], out: Optional[str] = None) -> int:
        """Write one CSV row per step; degenerate rows carry nan and are counted."""
        spec = create_sweep_spec(group, parameter, start, stop, steps, fixed)
        service = SweepService(self.config['sweep_workers'], self.config['progress_bar'],
                               self.config['closure_tolerance'])
        rows = service.run(spec)
        text = rows_to_csv(rows)
        if out:
            write_text(out, text)
            self.logger.info(f"Sweep with {len(rows)} rows written to {out}")
        else:
            sys.stdout.write(text)

        degenerate = service.degenerate_count(rows)
        if degenerate:
            print(f"warning: {degenerate} degenerate row(s)", file=sys.stderr)
        return EXIT_OK

    def cmd_simulate(self, netlist: Optional[str] = None, matrix_file: Optional[str] = None,
                     state_text: Optional[str] = None, photons: Optional[int] = None,
                     element_index: Optional[int] = None, output_format: str = 'text') -> int:
        """Propagate an input state through a netlist, a matrix, or one element."""
        if (netlist is None) == (matrix_file is None):
            raise InvalidParameterError("Give exactly one of --netlist or --matrix", field='netlist')

        if netlist is not None:
            circuit = circuit_from_json(read_text(netlist))
            if photons is not None:
                if element_index is None or not 1 <= element_index <= len(circuit):
                    raise InvalidParameterError(
                        f"--element must be between 1 and {len(circuit)} with --photons",
                        field='element'
                    )
                state = parse_state(state_text or "1" + ",0" * photons)
                output = simulate_two_channel_multiphoton(circuit.elements[element_index - 1], photons, state)
            else:
                state = parse_state(state_text) if state_text else None
                output = simulate_single_photon(circuit, state)
        else:
            u = read_matrix(matrix_file, special=False, tolerance=self.config['unitary_tolerance'])
            state = parse_state(state_text) if state_text else create_state([1.0] + [0.0] * (u.dim - 1))
            output = u @ state

        amplitudes = output.to_list()
        if output_format == 'json':
            print(json.dumps({"output": amplitudes}, indent=2))
        elif output_format == 'csv':
            print("index,re,im")
            for index, (re, im) in enumerate(amplitudes):
                print(f"{index},{format_machine(re)},{format_machine(im)}")
        else:
            print("\n=== SIMULATION ===")
            for index, (re, im) in enumerate(amplitudes):
                print(f"  {index}: {format_human(re)} {'+' if im >= 0 else '-'} {format_human(abs(im))}i"
                      f"   |a|^2 = {format_human(re * re + im * im)}")
        return EXIT_OK

    # ------------------------------------------------------------------

    def run(self, args: argparse.Namespace) -> int:
        """Dispatch a parsed command, map errors to exit codes and write the audit record."""
        log_runtime_config(self.config)
        start_time = time.time()
        self._residuals: Dict[str, Any] = {}
        error = None
        try:
            exit_code = self.dispatch(args)
        except GeoPhaseError as e:
            error = describe_error(e)
            print(f"Error: {e.message}", file=sys.stderr)
            exit_code = exit_code_for(e)

        if self.audit is not None:
            arguments = {k: v for k, v in vars(args).items() if k != 'handler'}
            self.audit.write_command_audit(
                args.command, arguments, exit_code,
                int((time.time() - start_time) * 1000), self._residuals, error
            )
        return exit_code

    def dispatch(self, args: argparse.Namespace) -> int:
        if args.command == 'phase':
            return self.cmd_phase(triangle_values(args), args.format)
        if args.command == 'decompose':
            return self.cmd_decompose(args.matrix, args.pattern, args.order, args.out, args.format)
        if args.command == 'circuit':
            path = {'s1': args.path_s1, 's2': args.path_s2, 's3': args.path_s3}
            return self.cmd_circuit(triangle_values(args), path, args.out, args.format)
        if args.command == 'sweep':
            fixed = {k: getattr(args, k) for k in GROUP_PARAMETERS[args.group]
                     if getattr(args, k) is not None}
            return self.cmd_sweep(args.group, args.param, args.start, args.stop, args.steps,
                                  fixed, args.out)
        return self.cmd_simulate(args.netlist, args.matrix, args.input, args.photons,
                                 args.element, args.format)


def triangle_values(args: argparse.Namespace) -> Dict[str, float]:
    """Collect the triangle parameters of the selected group from parsed flags."""
    names = GROUP_PARAMETERS[args.group]
    missing = [name for name in names if getattr(args, name) is None]
    if missing:
        raise InvalidParameterError(
            f"{args.group} needs --{' --'.join(missing)}",
            field=missing[0],
            details={'missing': missing}
        )
    return {name: getattr(args, name) for name in names}


def convert_degrees(args: argparse.Namespace) -> None:
    """Convert every angle flag from degrees to radians in place."""
    for name in ANGLE_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            setattr(args, name, math.radians(value))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Geometric Phase Runner')
    parser.add_argument('--config', type=str, default='config.yml',
                        help='Configuration file path')
    parser.add_argument('--tolerance', type=float,
                        help='Pass/fail tolerance of the command (agreement, round trip)')
    parser.add_argument('--degrees', action='store_true',
                        help='Read angle flags in degrees instead of radians')

    triangle = argparse.ArgumentParser(add_help=False)
    triangle.add_argument('--group', choices=['su3', 'su4'], default='su3')
    for name in ('s1', 's2', 'alpha', 'beta', 'beta1', 'beta2', 'beta3'):
        triangle.add_argument(f'--{name}', type=float)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument('--format', choices=['json', 'csv', 'text'], default='text')

    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('phase', parents=[triangle, fmt],
                        help='Geometric phase by every method')

    decompose_parser = commands.add_parser('decompose', help='Factor a special unitary from a matrix file')
    decompose_parser.add_argument('matrix', type=str, help='Matrix file')
    decompose_parser.add_argument('--pattern', choices=['auto', 'su3', 'su4', 'reck'], default='auto')
    decompose_parser.add_argument('--order', choices=['columns', 'rows'], default='columns',
                                  help='Nulling order for the reck pattern')
    decompose_parser.add_argument('--out', type=str, help='Also write the chain JSON here')
    decompose_parser.add_argument('--format', choices=['json', 'text'], default='json')

    circuit_parser = commands.add_parser('circuit', parents=[triangle, fmt],
                                         help='Build and simulate the interferometer')
    for name in ('path-s1', 'path-s2', 'path-s3'):
        circuit_parser.add_argument(f'--{name}', type=float,
                                    help='Path parameter (defaults to the leg end value)')
    circuit_parser.add_argument('--out', type=str, help='Netlist JSON path')

    sweep_parser = commands.add_parser('sweep', parents=[triangle], help='Sweep one triangle parameter')
    sweep_parser.add_argument('--param', required=True,
                              choices=['s1', 's2', 'alpha', 'beta', 'beta1', 'beta2', 'beta3'])
    sweep_parser.add_argument('--start', type=float, required=True)
    sweep_parser.add_argument('--stop', type=float, required=True)
    sweep_parser.add_argument('--steps', type=int, required=True)
    sweep_parser.add_argument('--out', type=str, help='CSV path (stdout when omitted)')

    simulate_parser = commands.add_parser('simulate', parents=[fmt], help='Propagate a state')
    simulate_parser.add_argument('--netlist', type=str)
    simulate_parser.add_argument('--matrix', type=str)
    simulate_parser.add_argument('--input', type=str, help='Input amplitudes, e.g. "1,0,0"')
    simulate_parser.add_argument('--photons', type=int, help='Photon number for a two-channel element')
    simulate_parser.add_argument('--element', type=int, help='1-based element index for --photons')

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.degrees:
        convert_degrees(args)

    try:
        runner = PhaseRunner(args.config, args.tolerance)
    except (OSError, ValueError) as e:
        print(f"Error: invalid configuration: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    return runner.run(args)


if __name__ == "__main__":
    sys.exit(main())
