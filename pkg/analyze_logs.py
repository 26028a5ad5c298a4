#!/usr/bin/env python3
# Copyright Polymorph Corporation (2026)

"""
Analytics script for solver run logs.

Calculates:
- Entries per status and per command
- Mean and max outer iterations of interface solves
- Worst per-fluid mass drift of simulation runs
- Recent failures for review

Usage:
    python analyze_logs.py [log_directory]
"""

import argparse
import json
from collections import Counter
from pathlib import Path


def parse_log_file(filepath: Path) -> list[dict]:
    """Parse NDJSON log file."""
    entries = []
    try:
        with open(filepath, 'r') as f:
            for line in f:
                if line.strip():
                    try:
                        entries.append(json.loads(line))
                    except json.JSONDecodeError:
                        continue
    except FileNotFoundError:
        pass
    return entries


def calculate_statistics(entries: list[dict]) -> dict:
    """Calculate analytics from log entries."""
    if not entries:
        return {
            'total': 0,
            'by_status': {},
            'by_command': {},
            'failure_rate': 0.0,
            'mean_iterations': None,
            'max_iterations': None,
            'worst_mass_drift': None,
            'problems': 0,
        }

    total = len(entries)
    by_status = Counter(e.get('status', 'unknown') for e in entries)
    by_command = Counter(e.get('command', 'unknown') for e in entries)
    iterations = [e['iterations'] for e in entries if isinstance(e.get('iterations'), (int, float))]
    drifts = [e['mass_drift'] for e in entries if isinstance(e.get('mass_drift'), (int, float))]
    failures = total - by_status.get('ok', 0)

    return {
        'total': total,
        'by_status': dict(by_status),
        'by_command': dict(by_command),
        'failure_rate': failures / total * 100,
        'mean_iterations': sum(iterations) / len(iterations) if iterations else None,
        'max_iterations': max(iterations) if iterations else None,
        'worst_mass_drift': max(drifts) if drifts else None,
        'problems': len(set(e.get('problem') for e in entries if e.get('problem'))),
    }


def get_recent_failures(entries: list[dict], limit: int = 10) -> list[dict]:
    """Get most recent failed commands."""
    failed = [
        {
            'timestamp': e.get('timestamp', 'unknown'),
            'command': e.get('command', ''),
            'problem': e.get('problem', ''),
            'status': e.get('status', ''),
            'message': e.get('message', ''),
        }
        for e in entries
        if e.get('status', 'ok') != 'ok'
    ]
    failed.sort(key=lambda x: x['timestamp'], reverse=True)
    return failed[:limit]


def _opt(value, fmt: str) -> str:
    return 'n/a' if value is None else format(value, fmt)


def format_report(stats: dict, recent: list[dict]) -> str:
    """Format analytics report."""
    lines = [
        "=" * 70,
        "SOLVER RUN ANALYTICS",
        "=" * 70,
        "",
        "SUMMARY",
        "-" * 70,
        f"Total entries:        {stats['total']}",
        f"Failed:               {stats['failure_rate']:.1f}%",
        f"Distinct problems:    {stats['problems']}",
        "",
        "BY STATUS",
        "-" * 70,
    ]
    for status, count in sorted(stats['by_status'].items()):
        lines.append(f"{status:<22}{count}")
    lines.extend(["", "BY COMMAND", "-" * 70])
    for command, count in sorted(stats['by_command'].items()):
        lines.append(f"{command:<22}{count}")
    lines.extend([
        "",
        "NUMERICS",
        "-" * 70,
        f"Mean iterations:      {_opt(stats['mean_iterations'], '.2f')}",
        f"Max iterations:       {_opt(stats['max_iterations'], 'd')}",
        f"Worst mass drift:     {_opt(stats['worst_mass_drift'], '.3e')}",
    ])

    if recent:
        lines.extend([
            "",
            "RECENT FAILURES",
            "-" * 70
        ])
        for i, item in enumerate(recent, 1):
            lines.append(f"\n{i}. {item['timestamp']}  {item['command']} {item['problem']} [{item['status']}]")
            lines.append(f"   {item['message'][:80]}")

    lines.append("\n" + "=" * 70)
    return "\n".join(lines)


def main(argv=None):
    parser = argparse.ArgumentParser(description='Analyze mie-riemann run logs')
    parser.add_argument('log_directory', nargs='?', default='./logs',
                        help='Directory containing log files (default: ./logs)')
    args = parser.parse_args(argv)

    log_dir = Path(args.log_directory)
    if not log_dir.exists():
        print(f"Error: Log directory not found: {log_dir}")
        return

    log_files = sorted(log_dir.glob('*-Solves.ndjson'))
    if not log_files:
        print(f"No log files found in {log_dir}")
        return

    print(f"Analyzing {len(log_files)} log file(s)...\n")

    all_entries = []
    for log_file in log_files:
        entries = parse_log_file(log_file)
        all_entries.extend(entries)
        print(f"  {log_file.name}: {len(entries)} entries")

    print()

    if not all_entries:
        print("No log entries found.")
        return

    stats = calculate_statistics(all_entries)
    recent = get_recent_failures(all_entries, limit=10)

    print(format_report(stats, recent))


if __name__ == '__main__':
    main()
