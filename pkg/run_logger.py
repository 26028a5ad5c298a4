# Copyright Polymorph Corporation (2026)

import json
import os
from dataclasses import asdict, dataclass
from datetime import datetime
from typing import Optional

STATUSES = ('ok', 'vacuum', 'nonconvergence', 'domain', 'config', 'error')


@dataclass
class SolveRecord:
    """Outcome of one CLI solve or run."""
    status: str = 'ok'
    iterations: Optional[int] = None
    p_star: Optional[float] = None
    u_star: Optional[float] = None
    wall_time: Optional[float] = None
    mass_drift: Optional[float] = None
    message: str = ''

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown solve status {self.status!r}; expected one of {', '.join(STATUSES)}")


def log_solve(log_path: str, command: str, problem: str, record: SolveRecord) -> None:
    """Log a solve or run in NDJSON format.

    Args:
        log_path: Directory path for log files
        command: CLI subcommand
        problem: Problem name or config path
        record: Outcome of the command
    """
    try:
        os.makedirs(log_path, exist_ok=True)

        # Daily filename: YYMMDD-Solves.ndjson
        filename = datetime.now().strftime('%y%m%d') + '-Solves.ndjson'
        filepath = os.path.join(log_path, filename)

        entry = {
            "timestamp": datetime.now().isoformat(),
            "command": command,
            "problem": problem,
            **asdict(record),
        }

        with open(filepath, 'a') as f:
            f.write(json.dumps(entry) + '\n')
    except Exception:
        # Don't let logging failures break a run
        pass
