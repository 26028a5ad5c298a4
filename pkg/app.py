# Copyright Polymorph Corporation (2026)

"""
mie-riemann command-line interface.

Subcommands:
    solve           star state of one two-medium Riemann problem
    profile         exact-solver profile of a planar problem at a given time
    run             cut-cell simulation with snapshots, gauges and a manifest
    check-eos       structural checks of the builtin equations of state
    export-problem  write a builtin problem as an editable JSON file
"""

import argparse
import csv
import json
import logging
import os
import sys
import time as wallclock
from typing import Any, Dict, List, Optional

import numpy as np
from dotenv import load_dotenv

from version import __version__
from config_validator import RunConfig, build_run_config
from eos import BUILTIN_EOS, EosConfigError, EosDomainError, EosError, condition_report
from flow1d import (
    Geometry,
    PositivityError,
    SchemeOptions,
    SimulationError,
    Snapshot,
    run_simulation,
    write_gauge_csv,
    write_snapshot_csv,
)
from problems import (
    ProblemConfigError,
    ProblemSpec,
    UnknownProblemError,
    builtin_problem,
    export_problem,
    load_problem,
    problem_to_dict,
    shock_metrics,
)
from riemann import (
    FluidState,
    HugoniotDomainError,
    IsentropeBreakdown,
    NonConvergence,
    VacuumError,
    sample_profile,
    solve_star,
)
from run_logger import SolveRecord, log_solve
import messages

load_dotenv()

logger = logging.getLogger(__name__)

# Configuration
CONFIG_FILE_PATH = os.environ.get('MIE_RIEMANN_CONFIG_FILE', './config.json')
RUN_LOG_PATH = os.environ.get('MIE_RIEMANN_LOG_PATH', './logs')
LOG_LEVEL = os.environ.get('MIE_RIEMANN_LOG_LEVEL', 'WARNING')

# Default hot-tunable settings
DEFAULT_CFL = float(os.environ.get('MIE_RIEMANN_CFL', 0.4))
DEFAULT_TOL = float(os.environ.get('MIE_RIEMANN_TOL', 1e-8))
DEFAULT_SUBSTEPS = int(os.environ.get('MIE_RIEMANN_SUBSTEPS', 1))
DEFAULT_CELLS = os.environ.get('MIE_RIEMANN_CELLS')
DEFAULT_CELLS = int(DEFAULT_CELLS) if DEFAULT_CELLS else None

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_VACUUM = 3
EXIT_NONCONVERGENCE = 4
EXIT_DOMAIN = 5

STATUS_BY_CODE = {
    EXIT_OK: 'ok',
    EXIT_ERROR: 'error',
    EXIT_CONFIG: 'config',
    EXIT_VACUUM: 'vacuum',
    EXIT_NONCONVERGENCE: 'nonconvergence',
    EXIT_DOMAIN: 'domain',
}


def load_config():
    """Load hot-tunable solver defaults from file. Re-reads on each call.

    Returns:
        dict: Configuration settings with defaults if file not found
    """
    defaults = {
        'cfl': DEFAULT_CFL,
        'tol': DEFAULT_TOL,
        'substeps': DEFAULT_SUBSTEPS,
        'hugoniot_tol': 1e-8,
        'cells': DEFAULT_CELLS,
        'out': './out',
    }

    try:
        with open(CONFIG_FILE_PATH, 'r', encoding='utf-8') as f:
            config = json.load(f)
            # Merge with defaults (file settings override defaults)
            return {**defaults, **config}
    except (FileNotFoundError, json.JSONDecodeError) as e:
        if isinstance(e, json.JSONDecodeError):
            print(f"Warning: Invalid JSON in {CONFIG_FILE_PATH}, using defaults", file=sys.stderr)
        return defaults


def exit_code_for(error: BaseException) -> int:
    """Map an exception to the CLI exit code; wrapped simulation errors follow their cause."""
    wrapped = False
    if isinstance(error, SimulationError) and not isinstance(error, PositivityError) and error.cause is not None:
        error = error.cause
        wrapped = True
    if isinstance(error, VacuumError):
        return EXIT_VACUUM
    if isinstance(error, NonConvergence):
        return EXIT_NONCONVERGENCE
    if isinstance(error, (EosDomainError, HugoniotDomainError, IsentropeBreakdown, PositivityError)):
        return EXIT_DOMAIN
    if wrapped:
        return EXIT_ERROR
    if isinstance(error, (ProblemConfigError, UnknownProblemError, EosConfigError, OSError, ValueError)):
        return EXIT_CONFIG
    return EXIT_ERROR


def diagnostic(error: BaseException, code: int) -> str:
    if code == EXIT_VACUUM:
        return messages.VACUUM_DIAGNOSTIC.format(message=error)
    if code == EXIT_NONCONVERGENCE:
        return messages.NONCONVERGENCE_DIAGNOSTIC.format(message=error)
    if code == EXIT_DOMAIN:
        return messages.DOMAIN_DIAGNOSTIC.format(message=error)
    if code == EXIT_CONFIG:
        return messages.CONFIG_DIAGNOSTIC.format(message=error)
    return messages.ERROR_DIAGNOSTIC.format(message=error)


def resolve_problem(config: RunConfig) -> ProblemSpec:
    if config.config_path:
        return load_problem(config.config_path)
    if config.problem:
        return builtin_problem(config.problem)
    raise ValueError("no problem given: use --problem NAME or --config FILE")


def parse_state(text: str, name: str) -> FluidState:
    parts = [p.strip() for p in text.split(',')]
    if len(parts) != 3:
        raise ValueError(f"{name} must be rho,u,p (got {text!r})")
    try:
        return FluidState(*(float(p) for p in parts))
    except ValueError:
        raise ValueError(f"{name} must be three numbers rho,u,p (got {text!r})")


def parse_eos(name: str):
    if name not in BUILTIN_EOS:
        raise EosConfigError(f"unknown EOS {name!r}; known: {', '.join(sorted(BUILTIN_EOS))}")
    return BUILTIN_EOS[name]


def _solver_kwargs(config: RunConfig) -> Dict[str, Any]:
    return {'tol': config.tol, 'substeps': config.substeps, 'hugoniot_tol': config.hugoniot_tol}


def _emit(payload: Dict[str, Any], as_json: bool, text: str) -> None:
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# Commands

def cmd_solve(config: RunConfig, args: argparse.Namespace) -> SolveRecord:
    """Solve the interface Riemann problem of a problem or of explicit states."""
    if config.problem or config.config_path:
        problem = resolve_problem(config)
        if problem.interface_pos is None:
            raise ProblemConfigError(f"{problem.name}: single-medium problem has no interface to solve")
        eos_l, state_l, eos_r, state_r = problem.eos_minus, problem.state_minus, problem.eos_plus, problem.state_plus
        label = problem.name
    else:
        eos_l, eos_r, state_l, state_r = None, None, None, None
        label = 'states'
    if args.eos_left:
        eos_l = parse_eos(args.eos_left)
    if args.eos_right:
        eos_r = parse_eos(args.eos_right)
    if args.left:
        state_l = parse_state(args.left, '--left')
    if args.right:
        state_r = parse_state(args.right, '--right')
    if None in (eos_l, eos_r, state_l, state_r):
        raise ValueError("solve needs --problem/--config or all of --eos-left --eos-right --left --right")

    started = wallclock.perf_counter()
    star = solve_star(eos_l, state_l, eos_r, state_r, **_solver_kwargs(config))
    elapsed = wallclock.perf_counter() - started
    payload = {'problem': label, **star.to_dict(), 'wall_time': elapsed}
    _emit(payload, config.json, messages.SOLVE_REPORT.format(
        problem=label,
        p_star=star.p_star,
        u_star=star.u_star,
        rho_star_l=star.rho_star_l,
        rho_star_r=star.rho_star_r,
        wave_l=star.wave_l.value,
        wave_r=star.wave_r.value,
        speeds_l=', '.join(f"{s:.6g}" for s in star.speeds_l),
        speeds_r=', '.join(f"{s:.6g}" for s in star.speeds_r),
        iterations=star.iterations,
        residual=star.residual,
    ))
    return SolveRecord(iterations=star.iterations, p_star=star.p_star, u_star=star.u_star,
                       wall_time=elapsed)


def cmd_profile(config: RunConfig, args: argparse.Namespace) -> SolveRecord:
    """Write the exact-solver profile of a planar problem to profile.csv."""
    problem = resolve_problem(config)
    if problem.geometry is not Geometry.PLANAR or problem.interface_pos is None:
        raise ProblemConfigError(f"{problem.name}: profiles are defined for planar two-medium problems")
    t = problem.t_end if config.time is None else config.time
    cells = config.cells or problem.cells
    lo, hi = problem.domain
    edges = np.linspace(lo, hi, cells + 1)
    x = 0.5 * (edges[:-1] + edges[1:])

    started = wallclock.perf_counter()
    star = solve_star(problem.eos_minus, problem.state_minus, problem.eos_plus, problem.state_plus,
                      **_solver_kwargs(config))
    prof = sample_profile(problem.eos_minus, problem.state_minus, problem.eos_plus, problem.state_plus,
                          star, x, t, problem.interface_pos)
    elapsed = wallclock.perf_counter() - started

    os.makedirs(config.out, exist_ok=True)
    path = os.path.join(config.out, 'profile.csv')
    write_snapshot_csv(path, Snapshot(t, prof['x'], prof['rho'], prof['u'], prof['p'], prof['e'],
                                      [str(s) for s in prof['side']]))
    _emit({'problem': problem.name, 'time': t, 'points': cells, 'path': path, **star.to_dict()},
          config.json,
          messages.PROFILE_SUMMARY.format(problem=problem.name, time=t, points=cells, path=path))
    return SolveRecord(iterations=star.iterations, p_star=star.p_star, u_star=star.u_star,
                       wall_time=elapsed)


def _write_manifest(path: str, manifest: Dict[str, Any]) -> None:
    with open(path, 'w') as f:
        json.dump(manifest, f, indent=2)
        f.write('\n')


def cmd_run(config: RunConfig, args: argparse.Namespace) -> SolveRecord:
    """Run a simulation and write snapshot/gauge CSVs and manifest.json."""
    problem = resolve_problem(config)
    cells = config.cells or problem.cells
    t_end = problem.t_end if config.time is None else config.time
    gauges = problem.gauges if config.gauges is None else config.gauges
    options = SchemeOptions(tol=config.tol, substeps=config.substeps, hugoniot_tol=config.hugoniot_tol)
    os.makedirs(config.out, exist_ok=True)
    manifest_path = os.path.join(config.out, 'manifest.json')
    manifest: Dict[str, Any] = {
        'version': __version__,
        'command': 'run',
        'problem': problem_to_dict(problem),
        'cells': cells,
        'cfl': config.cfl,
        'tol': config.tol,
        'substeps': config.substeps,
        'hugoniot_tol': config.hugoniot_tol,
        't_end': t_end,
        'snapshot_times': config.snapshots,
    }

    try:
        result = run_simulation(problem, cells=cells, cfl=config.cfl, t_end=t_end, gauges=gauges,
                                snapshot_times=config.snapshots, options=options)
    except SimulationError as e:
        code = exit_code_for(e)
        manifest.update({'status': STATUS_BY_CODE[code], 'error': e.to_dict()})
        _write_manifest(manifest_path, manifest)
        print(messages.SIMULATION_DIAGNOSTIC.format(time=e.time, cell=e.cell, message=e,
                                                    manifest=manifest_path), file=sys.stderr)
        raise

    for i, snap in enumerate(result.snapshots):
        write_snapshot_csv(os.path.join(config.out, f'snapshot_{i}.csv'), snap)
    gauge_rows = []
    for i, record in enumerate(result.gauges):
        write_gauge_csv(os.path.join(config.out, f'gauge_{i}.csv'), record)
        metrics = shock_metrics(record, problem.p_ambient, positive_phase_only=config.positive_phase)
        gauge_rows.append({'radius': record.radius, **metrics.to_dict()})

    audit = result.audit
    manifest.update({
        'status': 'ok',
        'steps': result.steps,
        'wall_time': result.wall_time,
        'snapshots': [{'index': i, 'time': s.time} for i, s in enumerate(result.snapshots)],
        'audit': audit.to_dict(),
        'gauges': gauge_rows,
        'impulse_positive_phase_only': config.positive_phase,
        'interface': result.interface_audit(),
    })
    _write_manifest(manifest_path, manifest)

    lines = [messages.RUN_SUMMARY.format(problem=problem.name, steps=result.steps, t_end=t_end,
                                         wall_time=result.wall_time,
                                         mass_drift_minus=audit.mass_drift_minus,
                                         mass_drift_plus=audit.mass_drift_plus, out=config.out)]
    for row in gauge_rows:
        arrival = 'none' if row['arrival_time'] is None else f"{row['arrival_time']:.6g} s"
        lines.append(messages.GAUGE_LINE.format(radius=row['radius'], peak=row['peak_overpressure'],
                                                impulse=row['impulse'], arrival=arrival))
    _emit(manifest, config.json, '\n'.join(lines))
    last = result.mesh.last_star
    return SolveRecord(p_star=last.p_star if last else None, u_star=last.u_star if last else None,
                       wall_time=result.wall_time,
                       mass_drift=max(audit.mass_drift_minus, audit.mass_drift_plus))


def cmd_check_eos(config: RunConfig, args: argparse.Namespace) -> SolveRecord:
    """Write the structural-condition table of the selected EOS to eos_check.csv."""
    names = args.eos or sorted(BUILTIN_EOS)
    rows: List[Dict[str, Any]] = []
    for name in names:
        model = parse_eos(name)
        for result in condition_report(model):
            rows.append({'eos': name, 'condition': result.name, 'passed': result.passed,
                         'worst': result.worst, 'detail': result.detail})

    os.makedirs(config.out, exist_ok=True)
    path = os.path.join(config.out, 'eos_check.csv')
    with open(path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['eos', 'condition', 'passed', 'worst', 'detail'])
        for row in rows:
            writer.writerow([row['eos'], row['condition'], 'pass' if row['passed'] else 'FAIL',
                             f"{row['worst']:.16e}", row['detail']])

    passed = sum(1 for r in rows if r['passed'])
    text = '\n'.join(messages.CHECK_EOS_LINE.format(
        eos=r['eos'], condition=r['condition'], verdict='pass' if r['passed'] else 'FAIL',
        worst=r['worst'], detail=r['detail']) for r in rows)
    text += '\n' + messages.CHECK_EOS_SUMMARY.format(passed=passed, total=len(rows), path=path)
    _emit({'path': path, 'passed': passed, 'total': len(rows), 'checks': rows}, config.json, text)
    status = 'ok' if passed == len(rows) else 'error'
    return SolveRecord(status=status, message=f"{len(rows) - passed} failed checks")


def cmd_export_problem(config: RunConfig, args: argparse.Namespace) -> SolveRecord:
    export_problem(args.name, args.path)
    print(messages.EXPORT_SUMMARY.format(problem=args.name, path=args.path))
    return SolveRecord()


COMMANDS = {
    'solve': cmd_solve,
    'profile': cmd_profile,
    'run': cmd_run,
    'check-eos': cmd_check_eos,
    'export-problem': cmd_export_problem,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--log-level', default=None,
                        help='Logging level (default: MIE_RIEMANN_LOG_LEVEL or WARNING)')
    common.add_argument('--json', action='store_true', help='Machine-readable output')
    common.add_argument('--out', default=None, help='Output directory (default: ./out)')

    problem = argparse.ArgumentParser(add_help=False)
    problem.add_argument('--problem', help='Builtin problem name')
    problem.add_argument('--config', help='Problem JSON file')

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument('--tol', type=float, default=None, help='Outer iteration tolerance')
    solver.add_argument('--substeps', type=int, default=None, help='RK4 steps per rarefaction evaluation')
    solver.add_argument('--hugoniot-tol', dest='hugoniot_tol', type=float, default=None,
                        help='Hugoniot density tolerance')

    parser = argparse.ArgumentParser(prog='mie-riemann',
                                     description='Multi-medium Riemann solver for Mie-Grüneisen materials')
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('solve', parents=[common, problem, solver], help='Solve one Riemann problem')
    p.add_argument('--left', help='Left state rho,u,p')
    p.add_argument('--right', help='Right state rho,u,p')
    p.add_argument('--eos-left', dest='eos_left', help='Builtin EOS on the left')
    p.add_argument('--eos-right', dest='eos_right', help='Builtin EOS on the right')

    p = sub.add_parser('profile', parents=[common, problem, solver], help='Exact-solver profile')
    p.add_argument('--time', type=float, default=None, help='Sample time (default: problem t_end)')
    p.add_argument('--cells', type=int, default=None, help='Number of sample points')

    p = sub.add_parser('run', parents=[common, problem, solver], help='Cut-cell simulation')
    p.add_argument('--cells', type=int, default=None, help='Number of cells')
    p.add_argument('--cfl', type=float, default=None, help='Courant number (default 0.4)')
    p.add_argument('--time', type=float, default=None, help='Final time (default: problem t_end)')
    p.add_argument('--gauges', default=None, help='Gauge coordinates r1,r2,...')
    p.add_argument('--snapshots', default=None, help='Snapshot times t1,t2,...')
    p.add_argument('--positive-phase', dest='positive_phase', action='store_true',
                   help='Integrate impulse over the first positive phase only')

    p = sub.add_parser('check-eos', parents=[common], help='Check EOS structural conditions')
    p.add_argument('--eos', action='append', default=None, help='Builtin EOS name (repeatable)')

    p = sub.add_parser('export-problem', parents=[common], help='Write a builtin problem as JSON')
    p.add_argument('name', help='Builtin problem name')
    p.add_argument('path', help='Destination JSON file')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = getattr(logging, (args.log_level or LOG_LEVEL).upper(), logging.WARNING)
    logging.basicConfig(level=level,
                        format='%(asctime)s %(name)s %(levelname)s %(message)s', stream=sys.stderr)

    flags = {k: v for k, v in vars(args).items() if k != 'command'}
    label = getattr(args, 'problem', None) or getattr(args, 'config', None) or getattr(args, 'name', '') or ''
    try:
        config, warnings = build_run_config(args.command, flags, load_config())
        for warning in warnings:
            print(warning, file=sys.stderr)
        record = COMMANDS[args.command](config, args)
        code = EXIT_OK if record.status == 'ok' else EXIT_ERROR
    except (EosError, ProblemConfigError, UnknownProblemError, ValueError, OSError,
            VacuumError, NonConvergence, HugoniotDomainError, IsentropeBreakdown, SimulationError) as e:
        code = exit_code_for(e)
        if not isinstance(e, SimulationError):
            print(diagnostic(e, code), file=sys.stderr)
        record = SolveRecord(status=STATUS_BY_CODE[code], message=str(e))
    log_solve(RUN_LOG_PATH, args.command, label, record)
    return code


if __name__ == '__main__':
    sys.exit(main())
