from .fringe import Fringe
from .report import SCHEMA_VERSION, build_report, without_timestamp, write_report
from .sweep import SweepSpec, SweepReport, Cell, sweep, is_compliant_start
from .searcher import BetaSearchResult, min_beta_for_compliance
from .experiments import ReplicationBundle, Finding, experiments, replicate
