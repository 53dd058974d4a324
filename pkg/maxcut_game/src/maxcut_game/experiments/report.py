"""
Experiment reports: histograms, golden checks, counterexamples and findings.

Reports contain no timestamps or timings, so a rerun with the same
configuration and tool version serializes to identical bytes.
"""

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

from sortedcontainers import SortedDict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_COUNTEREXAMPLE = 2

# Findings kept verbatim per claim; the rest are only counted.
FINDINGS_KEPT_PER_CLAIM = 20


class Histogram:
    """Integer-keyed counts kept in key order."""

    def __init__(self, bins: Optional[Iterable[int]] = None):
        self._counts = SortedDict()
        for key in bins or ():
            self._counts[key] = 0

    def add(self, key: int, count: int = 1) -> None:
        self._counts[key] = self._counts.get(key, 0) + count

    def merge(self, other: "Histogram") -> None:
        for key, count in other.items():
            self.add(key, count)

    def items(self):
        return self._counts.items()

    def total(self) -> int:
        return sum(self._counts.values())

    def get(self, key: int) -> int:
        return self._counts.get(key, 0)

    def to_dict(self) -> Dict[str, int]:
        return {str(key): count for key, count in self._counts.items()}

    def to_csv(self, key_name: str = "size") -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow([key_name, "count"])
        for key, count in self._counts.items():
            writer.writerow([key, count])
        return buffer.getvalue()


@dataclass
class GoldenCheck:
    """An expected value, the computed one, and where the expectation comes from."""

    name: str
    expected: Any
    actual: Any
    provenance: str

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "expected": self.expected,
            "actual": self.actual,
            "provenance": self.provenance,
            "passed": self.passed,
        }


@dataclass
class ExperimentReport:
    """
    Structured result of one experiment.

    Attributes:
        experiment: Experiment id
        config_digest: ``ExperimentConfig.digest()`` of the run
        version: Tool version
        header: Decisions the run depends on (readings of ambiguous parameters)
        records: Per-instance records, sorted by instance id
        histograms: Named histograms
        golden_checks: Expected-vs-actual checks
        counterexamples: Re-verified certificates that fail the run
        findings: Empirical findings that do not fail the run
        finding_counts: Number of findings per claim
    """

    experiment: str
    config_digest: str
    version: str
    header: Dict[str, Any] = field(default_factory=dict)
    records: List[Dict[str, Any]] = field(default_factory=list)
    histograms: Dict[str, Histogram] = field(default_factory=dict)
    golden_checks: List[GoldenCheck] = field(default_factory=list)
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)
    findings: List[Dict[str, Any]] = field(default_factory=list)
    finding_counts: Dict[str, int] = field(default_factory=dict)

    def check(self, name: str, expected: Any, actual: Any, provenance: str) -> bool:
        """Record a golden check and return whether it passed."""
        golden = GoldenCheck(name, expected, actual, provenance)
        self.golden_checks.append(golden)
        if not golden.passed:
            logger.error("%s: golden check %s failed (expected %r, got %r)", self.experiment, name, expected, actual)
        return golden.passed

    def add_counterexample(self, claim: str, instance: Dict[str, Any]) -> None:
        logger.error("%s: counterexample to %s", self.experiment, claim)
        self.counterexamples.append({"claim": claim, **instance})

    def add_finding(self, claim: str, finding: Dict[str, Any]) -> None:
        count = self.finding_counts.get(claim, 0)
        self.finding_counts[claim] = count + 1
        if count < FINDINGS_KEPT_PER_CLAIM:
            self.findings.append(finding)

    def histogram(self, name: str, bins: Optional[Iterable[int]] = None) -> Histogram:
        if name not in self.histograms:
            self.histograms[name] = Histogram(bins)
        return self.histograms[name]

    @property
    def failed_checks(self) -> List[GoldenCheck]:
        return [golden for golden in self.golden_checks if not golden.passed]

    @property
    def passed(self) -> bool:
        return not self.counterexamples and not self.failed_checks

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.passed else EXIT_COUNTEREXAMPLE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "config_digest": self.config_digest,
            "version": self.version,
            "header": self.header,
            "passed": self.passed,
            "records": self.records,
            "histograms": {name: hist.to_dict() for name, hist in sorted(self.histograms.items())},
            "golden_checks": [golden.to_dict() for golden in self.golden_checks],
            "counterexamples": self.counterexamples,
            "findings": self.findings,
            "finding_counts": dict(sorted(self.finding_counts.items())),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def write(self, out_dir: Union[str, Path]) -> List[Path]:
        """
        Write ``<experiment>.json`` and one ``<experiment>_<histogram>.csv`` per histogram.

        Returns:
            Paths written
        """
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = self.experiment.replace("-", "_")
        written = [out / f"{stem}.json"]
        written[0].write_text(self.to_json(), encoding="utf-8")
        for name, hist in sorted(self.histograms.items()):
            path = out / f"{stem}_{name}.csv"
            path.write_text(hist.to_csv(), encoding="utf-8")
            written.append(path)
        for path in written:
            logger.info("Wrote %s", path)
        return written
