# Copyright Polymorph Corporation (2026)

import json
from dataclasses import replace

import numpy as np
import pytest

from flow1d import Boundary, GaugeRecord, Geometry, Snapshot, run_simulation
from problems import (
    BUILTIN_PROBLEMS,
    ProblemConfigError,
    UnknownProblemError,
    builtin_problem,
    export_problem,
    load_problem,
    problem_from_dict,
    problem_to_dict,
    reference_profile,
    shock_metrics,
    validate_problem,
    wave_positions,
)
from riemann import FluidState, StarState, VacuumError, WaveType, solve_star


@pytest.mark.parametrize('name', sorted(BUILTIN_PROBLEMS))
def test_builtins_validate_and_round_trip(name):
    problem = builtin_problem(name)
    rebuilt = problem_from_dict(json.loads(json.dumps(problem_to_dict(problem))))
    assert rebuilt == problem


def test_spherical_builtins_have_reflective_centre():
    for name in ('air_blast', 'udex', 'tnt_air'):
        problem = builtin_problem(name)
        assert problem.geometry is Geometry.SPHERICAL
        assert problem.domain[0] == 0.0
        assert problem.bc_left is Boundary.REFLECTIVE
        assert problem.bc_right is Boundary.OUTFLOW
        assert problem.p_ambient == problem.state_plus.p


def test_unknown_problem():
    with pytest.raises(UnknownProblemError) as err:
        builtin_problem('no-such-problem')
    assert 'sod' in str(err.value)


def test_export_then_load(tmp_path):
    path = tmp_path / 'udex.json'
    record = export_problem('udex', str(path))
    assert record['geometry'] == 'spherical'
    assert load_problem(str(path)) == builtin_problem('udex')


def test_record_defaults_follow_geometry():
    record = problem_to_dict(builtin_problem('tnt_air'))
    for key in ('bc_left', 'bc_right', 'cells', 'gauges', 'p_ambient'):
        record.pop(key)
    problem = problem_from_dict(record)
    assert problem.bc_left is Boundary.REFLECTIVE
    assert problem.bc_right is Boundary.OUTFLOW
    assert problem.cells == 4000
    assert problem.p_ambient == 1.013e5


def test_record_accepts_builtin_eos_names():
    record = problem_to_dict(builtin_problem('gas_water_sg'))
    record['eos_plus'] = 'stiffened_water'
    assert problem_from_dict(record).eos_plus == builtin_problem('gas_water_sg').eos_plus


def test_load_problem_reports_bad_files(tmp_path):
    bad = tmp_path / 'bad.json'
    bad.write_text('{not json')
    with pytest.raises(ProblemConfigError, match='bad.json'):
        load_problem(str(bad))
    with pytest.raises(ProblemConfigError, match='cannot read'):
        load_problem(str(tmp_path / 'missing.json'))
    incomplete = tmp_path / 'incomplete.json'
    incomplete.write_text(json.dumps({'name': 'x', 'geometry': 'planar'}))
    with pytest.raises(ProblemConfigError, match='missing'):
        load_problem(str(incomplete))


@pytest.mark.parametrize('change, message', [
    ({'geometry': 'cylindrical'}, 'cylindrical'),
    ({'domain': [1.0, 0.0]}, 'empty domain'),
    ({'interface_pos': 2.0}, 'outside domain'),
    ({'gauges': [5.0]}, 'outside domain'),
    ({'state_minus': {'rho': 1.0, 'u': 0.0}}, 'state_minus'),
    ({'state_minus': {'rho': -1.0, 'u': 0.0, 'p': 1.0}}, 'sod'),
    ({'bc_right': 'periodic'}, 'periodic'),
])
def test_invalid_records(change, message):
    record = problem_to_dict(builtin_problem('sod'))
    record.update(change)
    with pytest.raises(ProblemConfigError, match=message):
        problem_from_dict(record)


def test_spherical_domain_must_start_at_origin_or_beyond():
    problem = replace(builtin_problem('udex'), domain=(-1.0, 15.0))
    with pytest.raises(ProblemConfigError):
        validate_problem(problem)


def test_vacuum_initial_data_are_rejected():
    problem = replace(builtin_problem('sod'), state_minus=FluidState(1.0, -7.0, 1.0),
                      state_plus=FluidState(1.0, 7.0, 1.0))
    with pytest.raises(VacuumError):
        validate_problem(problem)


def test_single_medium_problem_validates():
    problem = replace(builtin_problem('sod'), interface_pos=None, eos_plus=None, state_plus=None)
    assert validate_problem(problem) is problem
    result = run_simulation(problem, cells=20, t_end=0.05)
    assert result.audit.mass_drift_plus == 0.0
    assert result.interface_history == []


# Gauge metrics

def test_metrics_of_constant_record():
    record = GaugeRecord(1.0, [0.0, 1.0, 2.0], [1e5, 1e5, 1e5])
    metrics = shock_metrics(record, 1e5)
    assert metrics.peak_overpressure == 0.0
    assert metrics.impulse == 0.0
    assert metrics.arrival_time is None


def test_metrics_of_step_record():
    record = GaugeRecord(1.0, [0.0, 1.0, 1.0, 3.0], [1e5, 1e5, 3e5, 3e5])
    metrics = shock_metrics(record, 1e5)
    assert metrics.peak_overpressure == 2e5
    assert metrics.arrival_time == 1.0
    assert metrics.impulse == pytest.approx(4e5)


def test_metrics_of_triangle_pulse():
    t = np.linspace(0.0, 4.0, 401)
    p = 1e5 + np.interp(t, [0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 0.0, 1e5, 0.0, -2e4])
    metrics = shock_metrics(GaugeRecord(1.0, list(t), list(p)), 1e5)
    assert metrics.peak_overpressure == pytest.approx(1e5)
    assert metrics.impulse == pytest.approx(1e5, rel=1e-9)
    assert metrics.arrival_time == pytest.approx(1.01, abs=1e-9)
    positive = shock_metrics(GaugeRecord(1.0, list(t), list(p)), 1e5, positive_phase_only=True)
    assert positive.impulse == pytest.approx(1e5, rel=1e-9)


def test_positive_phase_stops_at_first_return_to_ambient():
    t = [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    p = [0.0, 2.0, 0.0, -1.0, 2.0, 0.0]
    record = GaugeRecord(1.0, t, [1.0 + v for v in p])
    assert shock_metrics(record, 1.0).impulse == pytest.approx(4.0)
    assert shock_metrics(record, 1.0, positive_phase_only=True).impulse == pytest.approx(2.0)


def test_metrics_need_samples():
    with pytest.raises(ValueError):
        shock_metrics(GaugeRecord(1.0), 1e5)


# Wave diagnostics

def test_wave_positions_on_synthetic_profile():
    x = np.linspace(0.0, 1.0, 101)
    p = np.where(x < 0.3, 1.0, np.where(x < 0.7, 0.5, 0.1))
    snap = Snapshot(0.1, x, np.ones_like(x), np.zeros_like(x), p, np.ones_like(x), ['minus'] * 101)
    star = StarState(0.5, 0.0, 1.0, 1.0, WaveType.RAREFACTION, WaveType.SHOCK, (0.0, 0.0), (0.0,), 1, 0.0)
    pos = wave_positions(snap, star, FluidState(1.0, 0.0, 1.0), FluidState(0.125, 0.0, 0.1), 0.5)
    assert pos['contact'] == 0.5
    assert 0.28 <= pos['left'] <= 0.32
    assert 0.68 <= pos['right'] <= 0.72


def test_gas_water_waves_lie_in_order():
    problem = builtin_problem('gas_water_sg')
    result = run_simulation(problem, cells=200)
    star = solve_star(problem.eos_minus, problem.state_minus, problem.eos_plus, problem.state_plus)
    pos = wave_positions(result.snapshots[-1], star, problem.state_minus, problem.state_plus,
                         result.mesh.interface_pos)
    assert pos['left'] < pos['contact'] < pos['right']
    shock = 0.5 + star.speeds_r[0] * problem.t_end
    assert pos['right'] == pytest.approx(shock, abs=0.02)


def test_gauge_sees_shock_arrive_in_planar_tube():
    problem = builtin_problem('sod')
    result = run_simulation(problem, cells=200)
    metrics = shock_metrics(result.gauges[0], problem.p_ambient)
    assert metrics.arrival_time is not None
    assert 0.0 < metrics.arrival_time < 0.1 / 1.75 * 1.2
    assert metrics.peak_overpressure == pytest.approx(0.30313 - 0.1, rel=0.05)


def test_reference_profile_is_planar_only():
    with pytest.raises(ProblemConfigError):
        reference_profile(builtin_problem('udex'), cells=50)
    snap = reference_profile(builtin_problem('sod'), cells=50)
    assert snap.time == 0.2
    assert len(snap.x) == 50


@pytest.mark.slow
def test_tnt_air_arrival_times_increase_with_radius():
    problem = builtin_problem('tnt_air')
    result = run_simulation(problem, cells=2000)
    metrics = [shock_metrics(rec, problem.p_ambient) for rec in result.gauges]
    arrivals = [m.arrival_time for m in metrics]
    assert all(a is not None for a in arrivals)
    assert arrivals == sorted(arrivals)
    impulses = [m.impulse for m in metrics]
    assert all(i > 0 for i in impulses)


def test_stiffened_water_shock_arrives_before_polynomial_water_shock():
    arrivals, speeds = {}, {}
    for name in ('gas_water_sg', 'gas_water_poly'):
        problem = builtin_problem(name)
        star = solve_star(problem.eos_minus, problem.state_minus, problem.eos_plus, problem.state_plus)
        speeds[name] = star.speeds_r[0]
        result = run_simulation(problem, cells=200)
        arrivals[name] = shock_metrics(result.gauges[0], problem.p_ambient).arrival_time
    assert speeds['gas_water_sg'] > speeds['gas_water_poly']
    assert arrivals['gas_water_sg'] <= arrivals['gas_water_poly']


@pytest.mark.slow
def test_shyue_waves_match_fine_reference():
    problem = builtin_problem('shyue')
    coarse = run_simulation(problem, cells=400)
    fine = run_simulation(problem, cells=10000, gauges=[])
    star = solve_star(problem.eos_minus, problem.state_minus, problem.eos_plus, problem.state_plus)
    dx = 1.0 / 400
    at_coarse = wave_positions(coarse.snapshots[-1], star, problem.state_minus, problem.state_plus,
                               coarse.mesh.interface_pos)
    at_fine = wave_positions(fine.snapshots[-1], star, problem.state_minus, problem.state_plus,
                             fine.mesh.interface_pos)
    for wave in ('left', 'contact', 'right'):
        assert at_coarse[wave] == pytest.approx(at_fine[wave], abs=2 * dx)


@pytest.mark.slow
@pytest.mark.parametrize('name', ['udex', 'air_blast'])
def test_spherical_blast_metrics_decay_with_radius(name):
    problem = builtin_problem(name)
    result = run_simulation(problem)
    metrics = [shock_metrics(rec, problem.p_ambient) for rec in result.gauges]
    peaks = [m.peak_overpressure for m in metrics]
    arrivals = [m.arrival_time for m in metrics]
    assert all(a > b for a, b in zip(peaks, peaks[1:]))
    assert all(m.impulse > 0 for m in metrics)
    assert all(a is not None for a in arrivals)
    assert all(a < b for a, b in zip(arrivals, arrivals[1:]))
    assert result.audit.mass_drift_minus < 1e-12
    assert result.audit.mass_drift_plus < 1e-12
