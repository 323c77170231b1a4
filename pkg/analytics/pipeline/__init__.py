from .bench import BenchResult, failure_bench  # noqa
from .config import RunConfig, load_run_config  # noqa
from .dataset import CycleSpec, generate_dataset, load_manifest, parse_cycle_specs  # noqa
from .executor import ExecutionContext, execute_dag  # noqa
from .report import Report, build_report  # noqa
from .runner import RunResult, run  # noqa
from .store import ERROR, LOW_QUALITY, OK, SKIPPED, RunDirectory, StageOutput, StageStore  # noqa
