"""End-to-end dataset generation: seeds -> formulas -> states -> pairs -> text."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from .formula import Formula, VarTable, parse_formula
from .frontend import formalize_statement, read_seed_file
from .llm import LLMConfig, LLMError, instantiate_many
from .pairs import SPLITS, PairStats, SamplePair, balance, build_pairs, split_dataset
from .rules import RuleBase, builtin_rules
from .search import SearchConfig, SearchStats, explore
from .semantics import entails
from .verbalize import VerbalizedPair, emit_prompt, verbalize_pair

DEFAULT_GEN_DEPTH = 3
DEFAULT_FRACTIONS = (Fraction(8, 14), Fraction(3, 14), Fraction(3, 14))
FULL_COUNTS = (8000, 3000, 3000)
TEMPLATE, LLM = "template", "llm"


def bundled_seeds() -> Path:
    return Path(str(resources.files("logicaug") / "data" / "seeds.txt"))


@dataclass(frozen=True)
class PipelineConfig:
    seeds_path: Path | None = None
    d_max: int = DEFAULT_GEN_DEPTH
    rules: RuleBase = field(default_factory=builtin_rules)
    disabled_rules: frozenset[str] = frozenset()
    ratio: tuple[int, int] = (1, 1)
    fractions: tuple[float, ...] | None = None
    counts: tuple[int, ...] | None = None
    seed: int = 42
    out_dir: Path = Path("dataset")
    mode: str = TEMPLATE
    llm: LLMConfig | None = None
    fallback_template: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.mode not in (TEMPLATE, LLM):
            raise ValueError(f"unknown verbalization mode {self.mode!r}")
        if self.mode == LLM and self.llm is None:
            raise ValueError("llm mode needs an LLM endpoint configuration")
        if self.fractions is not None and self.counts is not None:
            raise ValueError("give split fractions or split counts, not both")


@dataclass
class DatasetReport:
    var_table: VarTable
    starts: list[Formula]
    splits: dict[str, list[VerbalizedPair]]
    pair_stats: PairStats
    search_stats: list[SearchStats]
    pool_size: int
    llm_failures: int = 0
    paths: dict[str, Path] = field(default_factory=dict)

    def summary_lines(self) -> list[str]:
        lines = [f"seeds={len(self.starts)} variables={len(self.var_table)} pool={self.pool_size}",
                 f"pairs: {self.pair_stats.summary()}"]
        for name, rows in self.splits.items():
            pos = sum(1 for r in rows if r.pair.label == 1)
            lines.append(f"{name}: {len(rows)} pairs (label1={pos} label0={len(rows) - pos})")
        if self.llm_failures:
            lines.append(f"llm failures replaced by templates: {self.llm_failures}")
        return lines


def formalize_seeds(statements: Sequence[str]) -> tuple[list[Formula], VarTable]:
    """Formalize seed statements against one shared variable table."""
    vt = VarTable()
    return [formalize_statement(s, vt) for s in statements], vt


def seed_pairs(seed_id: int, start: Formula, cfg: PipelineConfig) -> tuple[list[SamplePair], PairStats, SearchStats]:
    res = explore(start, cfg.rules, SearchConfig(d_max=cfg.d_max, disabled_rules=cfg.disabled_rules))
    stats = PairStats()
    pairs = build_pairs(res, start, seed=cfg.seed, ratio=cfg.ratio, seed_id=seed_id, stats=stats)
    return pairs, stats, res.stats


def collect_pairs(starts: Sequence[Formula], cfg: PipelineConfig) -> tuple[list[SamplePair], PairStats, list[SearchStats]]:
    """Per-seed pairs merged in seed order, deduplicated by id and rebalanced."""
    jobs = [(i, f, cfg) for i, f in enumerate(starts)]
    if cfg.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(seed_pairs, *zip(*jobs)))
    else:
        results = [seed_pairs(*j) for j in jobs]
    stats = PairStats()
    merged: list[SamplePair] = []
    seen: set[str] = set()
    for pairs, st, _ in results:
        stats.merge(st)
        for p in pairs:
            if p.id in seen:
                stats.duplicates += 1
                continue
            seen.add(p.id)
            merged.append(p)
    return balance(merged, cfg.ratio, cfg.seed, stats), stats, [r[2] for r in results]


def split_pairs(pairs: Sequence[SamplePair], cfg: PipelineConfig) -> dict[str, list[SamplePair]]:
    """Explicit counts or fractions win; otherwise 8:3:3, capped at 8000/3000/3000."""
    if cfg.counts is not None:
        return split_dataset(pairs, seed=cfg.seed, counts=cfg.counts)
    if cfg.fractions is not None:
        return split_dataset(pairs, cfg.fractions, seed=cfg.seed)
    if len(pairs) >= sum(FULL_COUNTS):
        return split_dataset(pairs, seed=cfg.seed, counts=FULL_COUNTS)
    return split_dataset(pairs, DEFAULT_FRACTIONS, seed=cfg.seed)


def verbalize_pairs(pairs: Sequence[SamplePair], vt: VarTable, cfg: PipelineConfig) -> tuple[list[VerbalizedPair], int]:
    """Text for every pair, plus the number of LLM failures patched with templates."""
    if cfg.mode == TEMPLATE:
        return [verbalize_pair(p, vt, cfg.seed) for p in pairs], 0
    answers = instantiate_many([emit_prompt(p, vt) for p in pairs], cfg.llm, return_exceptions=True)
    out, failures = [], 0
    for p, ans in zip(pairs, answers):
        if isinstance(ans, LLMError):
            if not cfg.fallback_template:
                raise ans
            failures += 1
            out.append(verbalize_pair(p, vt, cfg.seed))
        else:
            out.append(VerbalizedPair(p, ans["text_a"], ans["text_b"], LLM))
    return out, failures


def write_jsonl(path: Path, rows: Sequence[VerbalizedPair]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in rows:
            fh.write(json.dumps(r.to_record(), ensure_ascii=False) + "\n")


def generate_dataset(cfg: PipelineConfig, log: Callable[[str], None] | None = None) -> DatasetReport:
    log = log or (lambda _msg: None)
    statements = read_seed_file(cfg.seeds_path or bundled_seeds())
    starts, vt = formalize_seeds(statements)
    log(f"formalized {len(starts)} seed statements")
    pairs, stats, search_stats = collect_pairs(starts, cfg)
    log(f"pool of {len(pairs)} balanced pairs")
    splits = split_pairs(pairs, cfg)
    report = DatasetReport(vt, starts, {}, stats, search_stats, len(pairs))
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    for name in SPLITS:
        rows, failures = verbalize_pairs(splits[name], vt, cfg)
        report.llm_failures += failures
        report.splits[name] = rows
        path = cfg.out_dir / f"{name}.jsonl"
        write_jsonl(path, rows)
        report.paths[name] = path
    with open(cfg.out_dir / "variables.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(vt.to_dict(), fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    return report


def audit_file(path: Path) -> list[str]:
    """Re-check every record's label against the oracle; returns offending ids."""
    bad = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            rec = json.loads(line)
            holds = entails(parse_formula(rec["formula_a"]), parse_formula(rec["formula_b"]))
            if holds != (rec["label"] == 1):
                bad.append(rec["id"])
    return bad
