"""Benchmark score normalization and pairwise-judgment aggregation.

Heterogeneous task metrics are normalized to [0, 1] and averaged
unweighted (translation tasks contribute their chrF++ value only, one per
direction); the average is reported as a percentage. Forced-choice judge
verdicts aggregate into per-opponent win rates plus a position-bias
statistic computable from stored judgments alone.
"""

import json
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence, Tuple

from .errors import ContractViolation, InputFormatError


class MetricKind(str, Enum):
    ACCURACY_0_100 = "accuracy_0_100"
    BLEU = "bleu"
    CHRF_PP = "chrf_pp"
    PASS_RATE = "pass_rate"


class TaskRole(str, Enum):
    INCLUDE = "include"
    TRANSLATION_USE_CHRF = "translation_use_chrf"
    EXCLUDE = "exclude"


@dataclass(frozen=True)
class TaskSpec:
    name: str
    metric: MetricKind = MetricKind.ACCURACY_0_100
    role: TaskRole = TaskRole.INCLUDE


@dataclass
class BenchmarkResult:
    model: str
    # task name -> metric kind value -> score (native scale)
    values: Dict[str, Dict[str, float]]


def normalize_score(kind: MetricKind, value: float) -> float:
    """Normalize a native-scale metric value into [0, 1].

    All four metric kinds are native 0-100 percentages and divide by 100.
    """
    kind = MetricKind(kind)
    if not 0.0 <= value <= 100.0:
        raise ContractViolation(f"{kind.value} value {value} outside its native range [0, 100]")
    return value / 100.0


def average_score(result: BenchmarkResult, specs: Sequence[TaskSpec]) -> float:
    """Unweighted mean of normalized task scores, as a percentage.

    Translation tasks (role translation_use_chrf) contribute only their
    chrF++ value; excluded tasks are skipped; a missing task or metric is
    a contract violation naming it.
    """
    normalized = []
    for spec in specs:
        if spec.role is TaskRole.EXCLUDE:
            continue
        if spec.name not in result.values:
            raise ContractViolation(f"model {result.model!r}: missing task {spec.name!r}")
        metrics = result.values[spec.name]
        metric = (
            MetricKind.CHRF_PP if spec.role is TaskRole.TRANSLATION_USE_CHRF else spec.metric
        )
        if metric.value not in metrics:
            raise ContractViolation(
                f"model {result.model!r}: task {spec.name!r} lacks metric {metric.value!r}"
            )
        normalized.append(normalize_score(metric, metrics[metric.value]))
    if not normalized:
        raise ContractViolation("no tasks contribute to the average")
    return 100.0 * sum(normalized) / len(normalized)


class Position(str, Enum):
    FIRST = "first"
    SECOND = "second"


class Preferred(str, Enum):
    A = "a"
    B = "b"


@dataclass(frozen=True)
class PairwiseJudgment:
    question_id: str
    model_a: str
    model_b: str
    position_of_a: Position
    preferred: Preferred
    ratings: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.model_a == self.model_b:
            raise ContractViolation(f"judgment {self.question_id!r} compares a model to itself")
        if self.ratings is not None and not all(0 <= r <= 5 for r in self.ratings):
            raise ContractViolation(
                f"judgment {self.question_id!r}: ratings must be integers in 0..5"
            )

    @property
    def winner(self):
        return self.model_a if self.preferred is Preferred.A else self.model_b

    @property
    def winner_position(self):
        if self.preferred is Preferred.A:
            return self.position_of_a
        return Position.SECOND if self.position_of_a is Position.FIRST else Position.FIRST


@dataclass
class OpponentRecord:
    wins: int = 0
    losses: int = 0

    @property
    def judgments(self):
        return self.wins + self.losses

    @property
    def win_rate(self):
        return self.wins / self.judgments if self.judgments else 0.0


@dataclass
class WinRateReport:
    focus: str
    per_opponent: Dict[str, OpponentRecord]
    overall_win_rate: float
    position_bias: float
    total_judgments: int


def aggregate_pairwise(judgments: Sequence[PairwiseJudgment], focus: str) -> WinRateReport:
    """Win/loss counts of `focus` against each opponent.

    position_bias is the fraction of all verdicts won by whichever answer
    was presented first, an audit of the position randomization.
    """
    per_opponent = {}
    total = 0
    focus_wins = 0
    first_position_wins = 0
    for judgment in judgments:
        if focus not in (judgment.model_a, judgment.model_b):
            raise ContractViolation(
                f"judgment {judgment.question_id!r} does not involve focus model {focus!r}"
            )
        opponent = judgment.model_b if judgment.model_a == focus else judgment.model_a
        record = per_opponent.setdefault(opponent, OpponentRecord())
        total += 1
        if judgment.winner == focus:
            record.wins += 1
            focus_wins += 1
        else:
            record.losses += 1
        if judgment.winner_position is Position.FIRST:
            first_position_wins += 1
    ordered = {name: per_opponent[name] for name in sorted(per_opponent)}
    return WinRateReport(
        focus=focus,
        per_opponent=ordered,
        overall_win_rate=focus_wins / total if total else 0.0,
        position_bias=first_position_wins / total if total else 0.0,
        total_judgments=total,
    )


def load_judgments(path) -> list:
    """Read PairwiseJudgment records from a JSONL file."""
    judgments = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                payload = json.loads(line)
                ratings = payload.get("ratings")
                judgments.append(
                    PairwiseJudgment(
                        question_id=str(payload["question_id"]),
                        model_a=payload["model_a"],
                        model_b=payload["model_b"],
                        position_of_a=Position(payload["position_of_a"]),
                        preferred=Preferred(payload["preferred"]),
                        ratings=tuple(ratings) if ratings is not None else None,
                    )
                )
            except (KeyError, ValueError) as exc:
                raise InputFormatError(
                    f"bad judgment record: {exc}", line_number=line_number
                ) from exc
    return judgments


def round_half_even(value: float, digits: int = 2) -> float:
    """Reported numbers round half to even; machine output keeps full precision."""
    return round(value, digits)


def render_score_table(results: Sequence[BenchmarkResult], specs: Sequence[TaskSpec]) -> str:
    """Per-task score table with the normalized average as the last row."""
    names = [result.model for result in results]
    width = max([len(n) for n in names] + [12])
    header = f"{'task':<28}" + "".join(f"{name:>{width + 2}}" for name in names)
    lines = [header, "-" * len(header)]
    for spec in specs:
        if spec.role is TaskRole.EXCLUDE:
            continue
        metric = (
            MetricKind.CHRF_PP if spec.role is TaskRole.TRANSLATION_USE_CHRF else spec.metric
        )
        cells = []
        for result in results:
            value = result.values.get(spec.name, {}).get(metric.value)
            cells.append("-" if value is None else f"{round_half_even(value):.2f}")
        label = spec.name if spec.role is TaskRole.INCLUDE else f"{spec.name} (chrF++)"
        lines.append(f"{label:<28}" + "".join(f"{cell:>{width + 2}}" for cell in cells))
    averages = [f"{round_half_even(average_score(result, specs)):.2f}" for result in results]
    lines.append(f"{'average score':<28}" + "".join(f"{a:>{width + 2}}" for a in averages))
    return "\n".join(lines)


def render_win_rate(report: WinRateReport):
    """(text table, plot rows) for win-rate bars."""
    rows = []
    lines = [f"focus model: {report.focus}"]
    lines.append(f"{'opponent':<24}{'wins':>8}{'losses':>8}{'win rate':>10}")
    for opponent, record in report.per_opponent.items():
        rows.append(
            {
                "opponent": opponent,
                "wins": record.wins,
                "losses": record.losses,
                "win_rate": record.win_rate,
            }
        )
        lines.append(
            f"{opponent:<24}{record.wins:>8}{record.losses:>8}"
            f"{100 * record.win_rate:>9.1f}%"
        )
    lines.append(
        f"overall win rate {100 * report.overall_win_rate:.1f}% "
        f"over {report.total_judgments} judgments; "
        f"position bias {report.position_bias:.3f}"
    )
    return "\n".join(lines), rows


def render_sweep_curve(entries: Sequence[Tuple[float, float]]):
    """(text table, plot rows) for merge-weight sweep curves.

    Rows are ordered by increasing lambda; displayed scores round half to
    even at two decimals while rows keep full precision.
    """
    ordered = sorted(entries)
    rows = [{"lambda": lam, "average_score": score} for lam, score in ordered]
    lines = [f"{'lambda':>8}{'average score':>16}"]
    for lam, score in ordered:
        lines.append(f"{lam:>8g}{round_half_even(score):>16.2f}")
    return "\n".join(lines), rows
