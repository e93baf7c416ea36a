"""Domain-conditioned round-trip translation evaluation.

Each pivot-language sentence is translated into the target language and
back; fidelity metrics compare the reconstruction with the original. The
headline score averages per-sentence fidelity within each domain first,
then averages uniformly across domains, so large domains carry no extra
weight.
"""

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Optional, Sequence, Tuple

from .errors import BackendError, ContractViolation, InputFormatError
from .metrics import BleuConfig, ChrfConfig, chrf_pp, corpus_bleu, cosine_similarity, sentence_bleu

KNOWN_METRICS = ("bleu", "chrf_pp", "cosine")
INVALID_DOMAIN_FAILURE_FRACTION = 0.10


@dataclass(frozen=True)
class DomainBenchmark:
    """Domain -> ordered (sentence id, source text) pairs, plus the pivot."""

    domains: Dict[str, Tuple[Tuple[str, str], ...]]
    pivot_language: str = "eng"

    def __post_init__(self):
        if not self.domains:
            raise ContractViolation("benchmark has no domains")
        for domain, sentences in self.domains.items():
            if not sentences:
                raise ContractViolation(f"domain {domain!r} is empty")
            ids = [sid for sid, _ in sentences]
            if len(ids) != len(set(ids)):
                raise ContractViolation(f"domain {domain!r} has duplicate sentence ids")

    @property
    def sentence_count(self):
        return sum(len(sentences) for sentences in self.domains.values())

    def fingerprint(self):
        canonical = json.dumps(
            {
                "pivot": self.pivot_language,
                "domains": {d: list(s) for d, s in sorted(self.domains.items())},
            },
            sort_keys=True,
            ensure_ascii=False,
        )
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def load_benchmark(path, pivot_language="eng") -> DomainBenchmark:
    """Read a JSONL benchmark ({"domain":, "id":, "text":} per line)."""
    domains = {}
    seen = set()
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                domain = record["domain"]
                sentence_id = str(record["id"])
                text = record["text"]
            except (ValueError, KeyError) as exc:
                raise InputFormatError(f"bad benchmark record: {exc}", line_number=line_number) from exc
            if not domain or not sentence_id or not isinstance(text, str) or not text:
                raise InputFormatError(
                    "benchmark records need non-empty domain, id, and text",
                    line_number=line_number,
                )
            if (domain, sentence_id) in seen:
                raise InputFormatError(
                    f"duplicate sentence id {sentence_id!r} in domain {domain!r}",
                    line_number=line_number,
                )
            seen.add((domain, sentence_id))
            domains.setdefault(domain, []).append((sentence_id, text))
    if not domains:
        raise ContractViolation(f"benchmark file {path} contains no records")
    frozen = {domain: tuple(sentences) for domain, sentences in domains.items()}
    return DomainBenchmark(domains=frozen, pivot_language=pivot_language)


@dataclass(frozen=True)
class RetryPolicy:
    attempts: int = 3
    backoff_base: float = 0.1
    backoff_factor: float = 2.0


@dataclass
class RttReport:
    backend_name: str
    forward_name: str
    backward_name: str
    benchmark_fingerprint: str
    config_fingerprint: str
    metrics: Tuple[str, ...]
    per_domain: Dict[str, Dict[str, float]]
    macro: Dict[str, float]
    scored_counts: Dict[str, int]
    failure_counts: Dict[str, int]
    invalid_domains: Tuple[str, ...]
    notes: Tuple[str, ...]
    transcript: list = field(default_factory=list)

    def to_dict(self, include_transcript=True):
        payload = {
            "backend_name": self.backend_name,
            "forward_name": self.forward_name,
            "backward_name": self.backward_name,
            "benchmark_fingerprint": self.benchmark_fingerprint,
            "config_fingerprint": self.config_fingerprint,
            "metrics": list(self.metrics),
            "per_domain": self.per_domain,
            "macro": self.macro,
            "scored_counts": self.scored_counts,
            "failure_counts": self.failure_counts,
            "invalid_domains": list(self.invalid_domains),
            "notes": list(self.notes),
        }
        if include_transcript:
            payload["transcript"] = self.transcript
        return payload

    def to_json_bytes(self, include_transcript=False):
        """Canonical machine-readable form; independent of concurrency."""
        return (
            json.dumps(self.to_dict(include_transcript), sort_keys=True, ensure_ascii=False)
            + "\n"
        ).encode("utf-8")

    @classmethod
    def from_dict(cls, payload):
        return cls(
            backend_name=payload["backend_name"],
            forward_name=payload["forward_name"],
            backward_name=payload["backward_name"],
            benchmark_fingerprint=payload["benchmark_fingerprint"],
            config_fingerprint=payload["config_fingerprint"],
            metrics=tuple(payload["metrics"]),
            per_domain=payload["per_domain"],
            macro=payload["macro"],
            scored_counts=payload["scored_counts"],
            failure_counts=payload["failure_counts"],
            invalid_domains=tuple(payload["invalid_domains"]),
            notes=tuple(payload["notes"]),
            transcript=payload.get("transcript", []),
        )

    def to_table(self):
        lines = [f"backend: {self.backend_name}"]
        header = f"{'domain':<24}" + "".join(f"{m:>12}" for m in self.metrics)
        lines.append(header)
        lines.append("-" * len(header))
        for domain in sorted(self.per_domain):
            row = f"{domain:<24}"
            for metric in self.metrics:
                value = self.per_domain[domain].get(metric)
                row += f"{value:>12.2f}" if value is not None else f"{'-':>12}"
            if domain in self.invalid_domains:
                row += "  [invalid: >10% failures]"
            lines.append(row)
        lines.append("-" * len(header))
        macro_row = f"{'macro average':<24}"
        for metric in self.metrics:
            value = self.macro.get(metric)
            macro_row += f"{value:>12.2f}" if value is not None else f"{'-':>12}"
        lines.append(macro_row)
        for note in self.notes:
            lines.append(f"note: {note}")
        return "\n".join(lines)


def _call_with_retry(callable_, policy: RetryPolicy):
    last_error = None
    for attempt in range(policy.attempts):
        try:
            return callable_()
        except BackendError as exc:
            last_error = exc
            if attempt + 1 < policy.attempts and policy.backoff_base > 0:
                time.sleep(policy.backoff_base * policy.backoff_factor**attempt)
    raise last_error


def _mean(values):
    return sum(values) / len(values)


def run_round_trip(
    benchmark: DomainBenchmark,
    forward,
    backward,
    metrics: Sequence[str] = ("bleu", "chrf_pp"),
    concurrency_limit: int = 1,
    bleu_config: Optional[BleuConfig] = None,
    chrf_config: Optional[ChrfConfig] = None,
    retry: Optional[RetryPolicy] = None,
    corpus_bleu_within_domain: bool = False,
    target_language: str = "und",
) -> RttReport:
    """Round-trip every benchmark sentence through forward then backward.

    `target_language` is the ISO 639-3 code of the language under
    evaluation ("und" when exercising mocks that ignore it). Results merge
    by sentence id, never completion order, so the report is identical for
    any concurrency_limit. Failed sentences (after retries) are excluded
    from score means and counted per domain; a domain with more than 10%
    failures is flagged invalid.
    """
    metrics = tuple(metrics)
    unknown = set(metrics) - set(KNOWN_METRICS)
    if unknown:
        raise ContractViolation(f"unknown metrics requested: {sorted(unknown)}")
    if concurrency_limit < 1:
        raise ContractViolation("concurrency_limit must be a positive integer")
    for backend in (forward, backward):
        if not backend.deterministic and not hasattr(backend, "cache"):
            raise ContractViolation(
                f"backend {backend.name!r} is non-deterministic; wrap it in a "
                "CachingBackend for reproducible evaluation"
            )
    retry = retry or RetryPolicy()
    notes = []
    effective_metrics = metrics
    if "cosine" in metrics and not backward.supports_embedding:
        effective_metrics = tuple(m for m in metrics if m != "cosine")
        notes.append("cosine omitted: backward backend provides no embeddings")

    pivot = benchmark.pivot_language
    target = target_language
    bleu_config = bleu_config or BleuConfig()
    chrf_config = chrf_config or ChrfConfig()

    def process(item):
        domain, sentence_id, source = item
        try:
            forward_text = _call_with_retry(
                lambda: forward.translate_batch([source], pivot, target)[0], retry
            )
            back_text = _call_with_retry(
                lambda: backward.translate_batch([forward_text], target, pivot)[0], retry
            )
            scores = {}
            if "bleu" in effective_metrics:
                scores["bleu"] = sentence_bleu(back_text, [source], bleu_config).value
            if "chrf_pp" in effective_metrics:
                scores["chrf_pp"] = chrf_pp(back_text, [source], chrf_config).value
            if "cosine" in effective_metrics:
                scores["cosine"] = cosine_similarity(
                    backward.embed(source), backward.embed(back_text)
                ).value
            return domain, sentence_id, {
                "source": source,
                "forward": forward_text,
                "back": back_text,
                "scores": scores,
                "status": "ok",
                "error": None,
            }
        except BackendError as exc:
            return domain, sentence_id, {
                "source": source,
                "forward": None,
                "back": None,
                "scores": {},
                "status": "failed",
                "error": str(exc),
            }

    work = [
        (domain, sentence_id, text)
        for domain in sorted(benchmark.domains)
        for sentence_id, text in benchmark.domains[domain]
    ]
    results = {}
    with ThreadPoolExecutor(max_workers=concurrency_limit) as executor:
        for domain, sentence_id, outcome in executor.map(process, work):
            results[(domain, sentence_id)] = outcome

    per_domain = {}
    scored_counts = {}
    failure_counts = {}
    invalid = []
    transcript = []
    for domain in sorted(benchmark.domains):
        outcomes = []
        for sentence_id, _ in benchmark.domains[domain]:
            outcome = results[(domain, sentence_id)]
            transcript.append({"domain": domain, "id": sentence_id, **outcome})
            outcomes.append(outcome)
        scored = [o for o in outcomes if o["status"] == "ok"]
        failed = len(outcomes) - len(scored)
        scored_counts[domain] = len(scored)
        failure_counts[domain] = failed
        if failed > INVALID_DOMAIN_FAILURE_FRACTION * len(outcomes):
            invalid.append(domain)
        if not scored:
            continue
        domain_scores = {}
        for metric in effective_metrics:
            if metric == "bleu" and corpus_bleu_within_domain:
                pairs = [(o["back"], [o["source"]]) for o in scored]
                domain_scores[metric] = corpus_bleu(pairs, bleu_config).value
            else:
                domain_scores[metric] = _mean([o["scores"][metric] for o in scored])
        per_domain[domain] = domain_scores

    macro = {
        metric: _mean([per_domain[d][metric] for d in per_domain])
        for metric in effective_metrics
        if per_domain
    }

    backend_name = (
        forward.name if forward.name == backward.name else f"{forward.name}+{backward.name}"
    )
    config_payload = {
        "benchmark": benchmark.fingerprint(),
        "forward": forward.name,
        "backward": backward.name,
        "target_language": target,
        "metrics": list(effective_metrics),
        "bleu": [bleu_config.max_ngram_order, bleu_config.smoothing.value, bleu_config.tokenizer.value],
        "chrf": [chrf_config.char_ngram_order, chrf_config.word_ngram_order, chrf_config.beta],
        "corpus_bleu_within_domain": corpus_bleu_within_domain,
    }
    config_fingerprint = hashlib.sha256(
        json.dumps(config_payload, sort_keys=True).encode("utf-8")
    ).hexdigest()

    return RttReport(
        backend_name=backend_name,
        forward_name=forward.name,
        backward_name=backward.name,
        benchmark_fingerprint=benchmark.fingerprint(),
        config_fingerprint=config_fingerprint,
        metrics=effective_metrics,
        per_domain=per_domain,
        macro=macro,
        scored_counts=scored_counts,
        failure_counts=failure_counts,
        invalid_domains=tuple(invalid),
        notes=tuple(notes),
        transcript=transcript,
    )


def rank_backends(reports: Sequence[RttReport]):
    """Macro-average leaderboard plus per-domain winner tallies.

    All reports must have been produced on the same benchmark. Domain ties
    go to the lexicographically smallest backend name.
    """
    reports = list(reports)
    if not reports:
        raise ContractViolation("rank_backends requires at least one report")
    fingerprints = {report.benchmark_fingerprint for report in reports}
    if len(fingerprints) != 1:
        raise ContractViolation(
            f"reports mix {len(fingerprints)} different benchmark fingerprints"
        )
    names = [report.backend_name for report in reports]
    if len(names) != len(set(names)):
        raise ContractViolation("duplicate backend names in ranking input")

    ranking = {"benchmark_fingerprint": reports[0].benchmark_fingerprint, "metrics": {}}
    all_metrics = sorted({metric for report in reports for metric in report.metrics})
    for metric in all_metrics:
        scored = [r for r in reports if metric in r.macro]
        leaderboard = sorted(
            ((r.backend_name, r.macro[metric]) for r in scored),
            key=lambda item: (-item[1], item[0]),
        )
        domains = sorted(
            set.intersection(*(set(r.per_domain) for r in scored)) if scored else set()
        )
        domain_winners = {}
        domain_wins = {r.backend_name: 0 for r in scored}
        for domain in domains:
            winner = min(
                scored,
                key=lambda r: (-r.per_domain[domain][metric], r.backend_name),
            ).backend_name
            domain_winners[domain] = winner
            domain_wins[winner] += 1
        ranking["metrics"][metric] = {
            "leaderboard": [{"backend": b, "macro": s} for b, s in leaderboard],
            "domain_wins": domain_wins,
            "domain_winners": domain_winners,
        }
    return ranking


def render_ranking(ranking):
    lines = []
    for metric, entry in ranking["metrics"].items():
        lines.append(f"metric: {metric}")
        for row in entry["leaderboard"]:
            wins = entry["domain_wins"].get(row["backend"], 0)
            total = len(entry["domain_winners"])
            lines.append(
                f"  {row['backend']:<28}{row['macro']:>10.2f}   wins {wins}/{total} domains"
            )
    return "\n".join(lines)
