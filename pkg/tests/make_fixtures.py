"""Regenerates the committed fixtures under tests/data/.

All text is synthetic. Run from the repository root:

    python tests/make_fixtures.py
"""

import json
import random
from pathlib import Path

import oracles

DATA = Path(__file__).parent / "data"

DOMAINS = {
    "arts": ["gallery", "sculpture", "painter", "canvas", "exhibit", "mural"],
    "autos": ["engine", "sedan", "gearbox", "mechanic", "mileage", "tire"],
    "beauty": ["serum", "fragrance", "stylist", "lotion", "manicure", "glow"],
    "books": ["novel", "chapter", "publisher", "paperback", "plot", "reader"],
    "business": ["invoice", "merger", "startup", "revenue", "quarter", "board"],
    "climate": ["emission", "glacier", "drought", "carbon", "monsoon", "forecasted"],
    "cooking": ["skillet", "broth", "marinade", "oven", "seasoning", "recipe"],
    "education": ["syllabus", "lecture", "tuition", "classroom", "exam", "teacher"],
    "entertainment": ["premiere", "sitcom", "audience", "trailer", "studio", "actor"],
    "finance": ["dividend", "ledger", "portfolio", "interest", "bond", "audit"],
    "gaming": ["console", "quest", "multiplayer", "arcade", "avatar", "level"],
    "health": ["clinic", "vaccine", "symptom", "therapy", "nurse", "dosage"],
    "history": ["empire", "archive", "treaty", "dynasty", "artifact", "siege"],
    "law": ["verdict", "statute", "plaintiff", "appeal", "contract", "tribunal"],
    "music": ["chorus", "violin", "tempo", "concert", "melody", "drummer"],
    "news": ["headline", "reporter", "bulletin", "editor", "deadline", "press"],
    "pets": ["kennel", "whisker", "leash", "terrier", "groomer", "aquarium"],
    "real_estate": ["mortgage", "tenant", "appraisal", "listing", "duplex", "landlord"],
    "science": ["hypothesis", "laboratory", "particle", "telescope", "specimen", "theory"],
    "shopping": ["checkout", "discount", "catalog", "voucher", "retailer", "basket"],
    "sports": ["stadium", "referee", "penalty", "tournament", "sprinter", "league"],
    "technology": ["processor", "firmware", "network", "sensor", "compiler", "database"],
    "travel": ["itinerary", "passport", "terminal", "luggage", "voyage", "hostel"],
    "weather": ["thunderstorm", "humidity", "barometer", "blizzard", "breeze", "hail"],
    "work": ["payroll", "deadline", "colleague", "workshop", "overtime", "resume"],
}

SUBJECTS = ["the committee", "a visitor", "the analyst", "our neighbor", "the crew", "a student"]
VERBS = ["reviewed", "compared", "described", "measured", "collected", "presented", "improved"]
TAILS = [
    "before the morning meeting",
    "during the long season",
    "without any warning",
    "for the annual report",
    "near the old station",
    "after the second attempt",
]


def rtt_benchmark(path, sentences_per_domain=50, seed=20240501):
    rng = random.Random(seed)
    rows = []
    for domain, vocabulary in DOMAINS.items():
        for index in range(sentences_per_domain):
            words = [
                rng.choice(SUBJECTS),
                rng.choice(VERBS),
                "the",
                rng.choice(vocabulary),
                "and",
                "the",
                rng.choice(vocabulary),
                rng.choice(TAILS),
                f"case {index + 1}.",
            ]
            text = " ".join(words)
            rows.append({"domain": domain, "id": f"{domain}-{index + 1:03d}", "text": text})
    with open(path, "w", encoding="utf-8") as handle:
        for row in rows:
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
    return len(rows)


METRIC_PAIRS = [
    {"candidate": "the quick brown fox jumps", "references": ["the quick brown fox jumps"]},
    {"candidate": "zebra umbrella xylophone", "references": ["cat dog mouse bird"]},
    {"candidate": "the cat sat on the mat", "references": ["the cat is on the mat"]},
    {"candidate": "the the the the", "references": ["the cat sat down"]},
    {"candidate": "a small boat crossed the wide river", "references": ["a small boat crossed the river"]},
    {"candidate": "rain fell over the valley all night", "references": ["rain fell on the valley through the night"]},
    {"candidate": "Hello, world!", "references": ["Hello world"]},
    {"candidate": "she bought two apples and three pears", "references": ["she bought two apples and three pears", "she purchased two apples and three pears"]},
    {"candidate": "the committee approved the annual budget", "references": ["the committee rejected the annual budget"]},
    {"candidate": "wind turbines generate clean electricity", "references": ["wind turbines produce clean electricity cheaply"]},
    {"candidate": "el rápido zorro marrón salta", "references": ["el rápido zorro marrón salta alto"]},
    {"candidate": "one two", "references": ["one two"]},
    {"candidate": "one two three", "references": ["three two one"]},
    {"candidate": "the train arrived exactly on time today", "references": ["the train arrived on time today", "today the train arrived punctually"]},
    {"candidate": "students read many books in the library", "references": ["students read several books at the library"]},
    {"candidate": "no overlap here at all", "references": ["completely different words everywhere instead"]},
    {"candidate": "repeat repeat repeat something new", "references": ["repeat something new twice"]},
    {"candidate": "the storm damaged the harbor, closing the port.", "references": ["the storm damaged the harbor and closed the port."]},
    {"candidate": "quality of translation depends on data", "references": ["translation quality depends on the data", "the quality of translation depends on data"]},
    {"candidate": "a b c d e f g", "references": ["a b c d e f", "a b c d e f g h"]},
]


def metric_fixtures(pairs_path, expected_path):
    with open(pairs_path, "w", encoding="utf-8") as handle:
        for row in METRIC_PAIRS:
            handle.write(json.dumps(row, ensure_ascii=False) + "\n")
    expected = []
    for row in METRIC_PAIRS:
        expected.append(
            {
                "sentence_bleu_exponential": oracles.oracle_sentence_bleu(
                    row["candidate"], row["references"], smoothing="exponential"
                ),
                "sentence_bleu_none": oracles.oracle_sentence_bleu(
                    row["candidate"], row["references"], smoothing="none"
                ),
                "chrf_pp": oracles.oracle_chrf_pp(row["candidate"], row["references"]),
            }
        )
    corpus = oracles.oracle_corpus_bleu(
        [(row["candidate"], row["references"]) for row in METRIC_PAIRS], smoothing="none"
    )
    with open(expected_path, "w", encoding="utf-8") as handle:
        json.dump({"pairs": expected, "corpus_bleu_none": corpus}, handle, indent=2)
        handle.write("\n")


SOURCE_DOC = [
    "lira tovu sema kana.",
    "venu pilo rasta meli.",
    "toki mana sulu vade.",
    "rimo kasa nolu pera.",
]

TARGET_DOC = [
    "The river crosses the valley.",
    "A farmer plants maize in spring.",
    "The market opens before sunrise.",
    "Children walk to the school.",
]


def alignment_fixtures():
    def dump(name, records):
        with open(DATA / name, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record, ensure_ascii=False) + "\n")

    (DATA / "align_source_doc.txt").write_text("\n".join(SOURCE_DOC) + "\n", encoding="utf-8")
    (DATA / "align_target_doc.txt").write_text("\n".join(TARGET_DOC) + "\n", encoding="utf-8")

    dump(
        "align_valid.jsonl",
        [
            {"source": [SOURCE_DOC[0]], "target": [TARGET_DOC[0]]},
            {"source": [SOURCE_DOC[1]], "target": [TARGET_DOC[1]]},
            {"source": [SOURCE_DOC[2], SOURCE_DOC[3]], "target": [TARGET_DOC[2]]},
        ],
    )
    dump(
        "align_swapped.jsonl",
        [
            {"source": [SOURCE_DOC[1]], "target": [TARGET_DOC[1]]},
            {"source": [SOURCE_DOC[0]], "target": [TARGET_DOC[0]]},
        ],
    )
    dump(
        "align_overlap.jsonl",
        [
            {"source": [SOURCE_DOC[0], SOURCE_DOC[1]], "target": [TARGET_DOC[0]]},
            {"source": [SOURCE_DOC[1], SOURCE_DOC[2]], "target": [TARGET_DOC[1]]},
        ],
    )
    dump(
        "align_same_language.jsonl",
        [
            {
                "source": ["the parliament approved the budget"],
                "target": ["the parliament approved the budget today"],
            }
        ],
    )
    with open(DATA / "align_bad_lines.jsonl", "w", encoding="utf-8") as handle:
        handle.write(json.dumps({"source": ["a b c"], "target": ["d e f"]}) + "\n")
        handle.write("{not valid json\n")
        handle.write(json.dumps({"source": ["x y z"]}) + "\n")
        handle.write(json.dumps({"source": ["a"], "target": ["b"], "note": "extra"}) + "\n")


LAMBDA_GRID = {
    "0.0": 36.91,
    "0.1": 39.47,
    "0.2": 41.71,
    "0.3": 44.52,
    "0.4": 47.54,
    "0.5": 49.49,
    "0.6": 50.89,
    "0.7": 51.73,
    "0.8": 51.42,
    "0.9": 50.94,
    "1.0": 50.48,
}

BENCHMARK_TASKS = [
    ("mmlu_lite", 64.50),
    ("arc_easy", 51.14),
    ("arc_hard", 42.41),
    ("mgsm", 53.20),
    ("xcopa", 71.20),
    ("xstorycloze", 67.90),
    ("piqa", 64.96),
    ("hellaswag", 51.89),
    ("xnli", 45.21),
    ("xwinograd", 70.37),
    ("belebele", 61.00),
]

TRANSLATION_TASKS = [
    ("flores_to_pivot", 27.84, 51.12),
    ("flores_from_pivot", 13.82, 49.47),
]


def aggregation_fixtures():
    with open(DATA / "lambda_sweep_scores.json", "w", encoding="utf-8") as handle:
        json.dump(LAMBDA_GRID, handle, indent=2)
        handle.write("\n")
    with open(DATA / "benchmark_row.jsonl", "w", encoding="utf-8") as handle:
        for task, value in BENCHMARK_TASKS:
            handle.write(
                json.dumps(
                    {"model": "adapted-12b", "task": task, "metric": "accuracy_0_100", "value": value}
                )
                + "\n"
            )
        for task, bleu_value, chrf_value in TRANSLATION_TASKS:
            handle.write(
                json.dumps({"model": "adapted-12b", "task": task, "metric": "bleu", "value": bleu_value})
                + "\n"
            )
            handle.write(
                json.dumps(
                    {"model": "adapted-12b", "task": task, "metric": "chrf_pp", "value": chrf_value}
                )
                + "\n"
            )
    with open(DATA / "benchmark_tasks.jsonl", "w", encoding="utf-8") as handle:
        for task, _ in BENCHMARK_TASKS:
            handle.write(json.dumps({"name": task, "metric": "accuracy_0_100", "role": "include"}) + "\n")
        for task, _, _ in TRANSLATION_TASKS:
            handle.write(json.dumps({"name": task, "metric": "bleu", "role": "translation_use_chrf"}) + "\n")


def main():
    DATA.mkdir(exist_ok=True)
    count = rtt_benchmark(DATA / "rttbench_25x50.jsonl")
    metric_fixtures(DATA / "metric_pairs_20.jsonl", DATA / "metric_expected.json")
    alignment_fixtures()
    aggregation_fixtures()
    print(f"wrote fixtures under {DATA} ({count} benchmark sentences)")


if __name__ == "__main__":
    main()
