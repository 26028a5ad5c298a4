# Copyright Polymorph Corporation (2026)

"""
Centralized message strings for mie-riemann.

All user-facing diagnostics printed by the CLI live here and are filled in
with str.format.
"""

VACUUM_DIAGNOSTIC = """vacuum: {message}
The two states separate faster than their rarefactions can fill the gap, so no
star state with positive pressure exists. Reduce u_r - u_l or raise a pressure."""

NONCONVERGENCE_DIAGNOSTIC = """nonconvergence: {message}
Try a larger --substeps, a looser --tol, or check that the states are physical."""

DOMAIN_DIAGNOSTIC = """domain: {message}
A density or pressure left the region where the equation of state is valid
(or the sound speed became imaginary). Check the initial data and EOS parameters."""

CONFIG_DIAGNOSTIC = """config: {message}"""

SIMULATION_DIAGNOSTIC = """simulation failed at t={time} s (cell {cell}): {message}
The failing states are recorded in {manifest}."""

ERROR_DIAGNOSTIC = """error: {message}"""

SOLVE_REPORT = """problem:      {problem}
p*:           {p_star:.10g} Pa
u*:           {u_star:.10g} m/s
rho*_l:       {rho_star_l:.10g} kg/m^3
rho*_r:       {rho_star_r:.10g} kg/m^3
left wave:    {wave_l} {speeds_l}
right wave:   {wave_r} {speeds_r}
iterations:   {iterations}
residual:     {residual:.3e} m/s"""

RUN_SUMMARY = """{problem}: {steps} steps to t={t_end:g} s in {wall_time:.2f} s
mass drift:   minus {mass_drift_minus:.3e}, plus {mass_drift_plus:.3e}
output:       {out}"""

GAUGE_LINE = """gauge r={radius:g} m: peak {peak:.6g} Pa, impulse {impulse:.6g} Pa*s, arrival {arrival}"""

PROFILE_SUMMARY = """{problem}: exact profile at t={time:g} s, {points} points -> {path}"""

CHECK_EOS_LINE = """{eos:<22} {condition:<28} {verdict:<5} worst={worst:.3e}  {detail}"""

CHECK_EOS_SUMMARY = """{passed}/{total} checks passed -> {path}"""

EXPORT_SUMMARY = """wrote {problem} to {path}"""
