"""Tunneling times for Klein-Gordon scattering off a rectangular barrier."""

from .errors import (BracketError, DomainError, EdgeError, KGTunnelError, NotSupportedError,
                     SchemaError, SpecError)
from .kinematics import (BarrierConfig, Edge, EnergyPoint, Zone, classical_traversal,
                         classify_zone, derive_point, tunneling_grid)
from .scattering import (ScatteringSolution, closed_form_phase, closed_form_T_magnitude,
                         solve_matching, transmission_edge_exact, transmission_limit)
from .times import (TimeReport, dwell_time_analytic, dwell_time_integral, identity_report,
                    phase_time_analytic, phase_time_numeric, rescaled_dwell,
                    rescaled_dwell_current, self_interference, time_report)
from .wavepacket import PacketSpec, peak_arrival_time, synthesize_transmitted

__version__ = "0.1.0"
