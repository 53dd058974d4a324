"""
Experiment configuration.

Defaults live on ``ExperimentConfig``; a YAML file may override any field and
explicit command-line flags override the file.
"""

import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

import yaml

logger = logging.getLogger(__name__)

# Fields that change how a run executes but never what it reports.
EXECUTION_FIELDS = ("jobs", "out_dir", "progress")

VERIFY_MODES = ("seven_strong", "full_strong", "two_colors", "many_colors")
GRAPH_SOURCES = ("atlas", "labeled", "er")


@dataclass
class ExperimentConfig:
    """
    Every knob an experiment reads.

    Attributes:
        experiment: Experiment id, set by the command that runs
        seed: Master seed for sampled graphs, colourings and fuzz instances
        jobs: Worker processes for instance-level parallelism
        out_dir: Directory for JSON and CSV outputs; None writes nothing
        progress: Show tqdm progress bars
        budget: Node-expansion budget per exact search; None is unlimited
        max_optima: Instances with more canonical optima are skipped with a warning
        mode: verify-theorems mode, one of ``VERIFY_MODES``
        graph_source: verify-theorems source, one of ``GRAPH_SOURCES``
        n_max: Largest vertex count for exhaustive sweeps
        k_values: Colour counts for exhaustive sweeps
        sample_count: Number of sampled ER graphs for verify-theorems
        sample_degrees: Average degrees cycled through by sampled graphs
        er_n: Vertex count of the random-graph experiment
        er_avg_degrees: Average degrees of the random-graph experiment
        er_graphs_per_degree: Graphs generated per average degree
        er_k: Colours in the random-graph experiment
        fuzz_count: Random instances for identity-fuzz
        grid_n_max: Largest n of the exhaustive identity grid
        grid_k_max: Largest k of the exhaustive identity grid
        dynamics_count: Random instances for dynamics-fuzz
        dynamics_n_max: Largest n for dynamics-fuzz
        dynamics_k_max: Largest k for dynamics-fuzz
        audit_n_max: Largest n for the pruning audit
        audit_k_max: Largest k for the pruning audit
        audit_cap: Minimal deviations audited per colouring; None audits all of them
        fail_on: Empirical claims whose findings fail the run
    """

    experiment: str = ""
    seed: int = 0
    jobs: int = 1
    out_dir: Optional[str] = None
    progress: bool = False
    budget: Optional[int] = None
    max_optima: int = 5000
    mode: str = "seven_strong"
    graph_source: str = "atlas"
    n_max: int = 6
    k_values: List[int] = field(default_factory=lambda: [2, 3])
    sample_count: int = 200
    sample_degrees: List[float] = field(default_factory=lambda: [3.0, 4.0, 5.0])
    er_n: int = 15
    er_avg_degrees: List[float] = field(default_factory=lambda: [5.0, 10.0])
    er_graphs_per_degree: int = 10
    er_k: int = 3
    fuzz_count: int = 10000
    grid_n_max: int = 4
    grid_k_max: int = 3
    dynamics_count: int = 1000
    dynamics_n_max: int = 20
    dynamics_k_max: int = 4
    audit_n_max: int = 6
    audit_k_max: int = 3
    audit_cap: Optional[int] = None
    fail_on: List[str] = field(default_factory=lambda: ["color_range_gain", "small_coalition_gain"])

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            ValueError: On out-of-range values or unknown mode/source names
        """
        if self.jobs < 1:
            raise ValueError(f"jobs must be at least 1, got {self.jobs}")
        if self.mode not in VERIFY_MODES:
            raise ValueError(f"Unknown mode {self.mode!r}; expected one of {VERIFY_MODES}")
        if self.graph_source not in GRAPH_SOURCES:
            raise ValueError(f"Unknown graph source {self.graph_source!r}; expected one of {GRAPH_SOURCES}")
        if self.budget is not None and self.budget < 1:
            raise ValueError(f"budget must be positive, got {self.budget}")
        if self.audit_cap is not None and self.audit_cap < 1:
            raise ValueError(f"audit_cap must be positive, got {self.audit_cap}")
        for name in ("n_max", "audit_n_max", "grid_n_max"):
            if getattr(self, name) > 7:
                raise ValueError(f"{name} must be at most 7 (graph atlas limit), got {getattr(self, name)}")
        if any(k < 1 for k in self.k_values) or self.er_k < 1:
            raise ValueError("Colour counts must be at least 1")

    def result_fields(self) -> Dict[str, Any]:
        return {key: value for key, value in dataclasses.asdict(self).items() if key not in EXECUTION_FIELDS}

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of every result-affecting field."""
        payload = json.dumps(self.result_fields(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def with_overrides(self, **overrides: Any) -> "ExperimentConfig":
        """Copy with the given fields replaced; None values are ignored."""
        return dataclasses.replace(self, **{key: value for key, value in overrides.items() if value is not None})


def config_from_mapping(values: Mapping[str, Any], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """
    Apply a mapping of overrides.

    Raises:
        ValueError: On unknown keys
    """
    known = {f.name for f in dataclasses.fields(ExperimentConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ValueError(f"Unknown configuration keys: {', '.join(unknown)}")
    return (base or ExperimentConfig()).with_overrides(**dict(values))


def load_config(path: Union[str, Path], base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """
    Read a YAML configuration file.

    Args:
        path: YAML file holding a mapping of field overrides
        base: Configuration to override; defaults to ``ExperimentConfig()``

    Raises:
        ValueError: If the file is not a mapping or has unknown keys
    """
    with open(path, "r", encoding="utf-8") as handle:
        values = yaml.safe_load(handle) or {}
    if not isinstance(values, dict):
        raise ValueError(f"{path}: expected a mapping at top level")
    logger.info("Loaded configuration from %s", path)
    return config_from_mapping(values, base)
