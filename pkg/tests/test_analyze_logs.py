# Copyright Polymorph Corporation (2026)

import json

import pytest

from analyze_logs import calculate_statistics, format_report, get_recent_failures, main, parse_log_file
from run_logger import SolveRecord, log_solve


def test_logged_records_are_analyzed(tmp_path, capsys):
    log_dir = tmp_path / 'logs'
    log_solve(str(log_dir), 'solve', 'sod', SolveRecord(iterations=4, p_star=0.3, u_star=0.9))
    log_solve(str(log_dir), 'solve', 'shyue', SolveRecord(iterations=6))
    log_solve(str(log_dir), 'run', 'udex', SolveRecord(mass_drift=2e-14))
    log_solve(str(log_dir), 'solve', 'states', SolveRecord(status='vacuum', message='vacuum: gap'))

    (path,) = log_dir.glob('*-Solves.ndjson')
    entries = parse_log_file(path)
    assert len(entries) == 4
    stats = calculate_statistics(entries)
    assert stats['total'] == 4
    assert stats['by_status'] == {'ok': 3, 'vacuum': 1}
    assert stats['by_command'] == {'solve': 3, 'run': 1}
    assert stats['failure_rate'] == 25.0
    assert stats['mean_iterations'] == 5.0
    assert stats['max_iterations'] == 6
    assert stats['worst_mass_drift'] == 2e-14
    assert stats['problems'] == 4

    recent = get_recent_failures(entries)
    assert [r['status'] for r in recent] == ['vacuum']
    report = format_report(stats, recent)
    assert 'SOLVER RUN ANALYTICS' in report and 'RECENT FAILURES' in report

    main([str(log_dir)])
    assert 'Total entries:        4' in capsys.readouterr().out


def test_malformed_lines_are_skipped(tmp_path):
    path = tmp_path / '260101-Solves.ndjson'
    path.write_text(json.dumps({'status': 'ok'}) + '\n{oops\n\n')
    assert parse_log_file(path) == [{'status': 'ok'}]
    assert parse_log_file(tmp_path / 'missing.ndjson') == []


def test_empty_statistics():
    stats = calculate_statistics([])
    assert stats['total'] == 0
    assert 'n/a' in format_report(stats, [])


def test_log_failures_do_not_raise(tmp_path):
    blocker = tmp_path / 'file'
    blocker.write_text('')
    log_solve(str(blocker / 'logs'), 'solve', 'sod', SolveRecord())


def test_unknown_status_is_rejected():
    with pytest.raises(ValueError, match='unknown solve status'):
        SolveRecord(status='weird')
