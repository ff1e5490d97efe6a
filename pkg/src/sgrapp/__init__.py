"""Butterfly counting and estimation over bipartite graph streams."""

from .analysis import (butterfly_hub_fractions, degree_support_correlation,
                       densification_series, fit_densification, hub_connection_fraction,
                       hub_set, interarrival_distribution, young_old_hubs)
from .estimator import (ErrorBounds, EstimatorState, SequencingError, StepResult,
                        error_bounds, interwindow_bounds, sgrapp_step, sgrapp_x_step)
from .exact import (brute_force_count, butterfly_support, count_butterflies,
                    count_incident_butterflies, enumerate_butterflies)
from .fleet import FleetState, fleet_estimate, fleet_process
from .generate import BAConfig, assign_timestamps, generate_ba_unipartite, project_bipartite
from .harness import (RunConfig, WindowMetrics, ground_truth_series, mape,
                      run_pipeline, write_metrics_csv, write_truth_csv)
from .stream import (BipartiteSnapshot, EdgeFormat, ParseError, StreamRecord,
                     StreamSource, ValidationError, VertexInterner, load_stream,
                     parse_record, snapshot_from_edges, write_stream)
from .windows import AdaptiveWindower, ClosedWindow

__version__ = "0.1.0"
