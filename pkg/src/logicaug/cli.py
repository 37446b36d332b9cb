"""Command-line interface.

Exit codes: 0 success, 1 domain failure (no derivation, rule disagreement,
unparsable formula or sentence, audit violation, LLM failure), 2 usage or I/O
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .formula import FormulaSyntaxError, VarTable, parse_formula, print_formula
from .frontend import PurificationError, formalize
from .llm import LLMConfig, LLMError
from .pairs import InsufficientPairs
from .pipeline import DEFAULT_GEN_DEPTH, LLM, TEMPLATE, PipelineConfig, audit_file, generate_dataset
from .rules import RuleBase, RuleError, builtin_rules, load_rules, validate_rules
from .search import DEFAULT_ENUM_DEPTH, DEFAULT_PROVE_DEPTH, SearchConfig, explore, prove
from .trace import format_path

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad configuration or unreadable input; exits with code 2."""


class DomainError(Exception):
    pass


# ---------------------------------------------------------------------------
# option resolution: command line, then --config file, then built-in default


def read_config(path: str) -> dict[str, str]:
    """Parse a ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read config {path}: {e.strerror or e}") from None
    out = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


class Options:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.config = read_config(args.config) if getattr(args, "config", None) else {}

    def get(self, name: str, default=None, conv=str):
        value = getattr(self.args, name, None)
        if value is not None:
            return value
        if name in self.config:
            try:
                return conv(self.config[name])
            except ValueError as e:
                raise UsageError(f"config value for {name!r}: {e}") from None
        return default


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _ids(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def resolve_rules(source: str | None) -> RuleBase:
    """``--rules`` takes a JSONL rule file or a comma-separated list of builtin ids."""
    builtin = builtin_rules()
    if not source:
        return builtin
    path = Path(source)
    if path.is_file():
        try:
            return load_rules(path)
        except OSError as e:
            raise UsageError(f"cannot read rules {source}: {e.strerror or e}") from None
        except RuleError as e:
            raise UsageError(str(e)) from None
    ids = _ids(source)
    if ids and all(i in builtin.ids for i in ids):
        return builtin.only(ids)
    if path.suffix or "/" in source or path.exists():
        raise UsageError(f"rule file not found: {source}")
    unknown = [i for i in ids if i not in builtin.ids]
    raise UsageError(f"unknown rule ids: {', '.join(unknown)}")


def _disabled(opts: Options, rb: RuleBase) -> frozenset[str]:
    ids = frozenset(_ids(opts.get("disable", "") or ""))
    unknown = sorted(ids - set(rb.ids))
    if unknown:
        raise UsageError(f"cannot disable unknown rules: {', '.join(unknown)}")
    return ids


def _formula(text: str, what: str):
    try:
        return parse_formula(text)
    except FormulaSyntaxError as e:
        raise DomainError(f"cannot parse {what}: {e}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text, encoding="utf-8", newline="\n")
        except OSError as e:
            raise UsageError(f"cannot write {out}: {e.strerror or e}") from None
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_verify_rules(opts: Options) -> int:
    report = validate_rules(resolve_rules(opts.get("rules")))
    for v in report.verdicts:
        print(v.line())
    bad = report.disagreements
    if bad:
        print(f"{len(bad)} of {len(report.verdicts)} rules disagree with the oracle: "
              + ", ".join(v.id for v in bad))
        return EXIT_FAIL
    print(f"all {len(report.verdicts)} rule labels agree with the oracle")
    return EXIT_OK


def cmd_parse(opts: Options) -> int:
    vt = VarTable()
    for sentence in opts.args.sentence:
        try:
            outcome = formalize(sentence, vt)
        except PurificationError as e:
            raise DomainError(str(e)) from None
        print(print_formula(outcome.formula, "pretty"))
    for var_id, phrase in vt.items():
        print(f"{vt.symbol(var_id)}: {phrase}")
    return EXIT_OK


def cmd_explore(opts: Options) -> int:
    start = _formula(opts.args.formula, "formula")
    rb = resolve_rules(opts.get("rules"))
    cfg = SearchConfig(
        d_max=opts.get("depth", DEFAULT_ENUM_DEPTH, int),
        disabled_rules=_disabled(opts, rb),
        max_results=opts.get("max_results", None, int),
    )
    res = explore(start, rb, cfg)
    _emit(res.to_jsonl(), opts.get("out"))
    print(f"s1={len(res.s1)} s2={len(res.s2)} {res.stats.summary()}", file=sys.stderr)
    return EXIT_OK


def cmd_derive(opts: Options) -> int:
    args = opts.args
    start = _formula(args.source, "premise")
    target = _formula(args.target, "conclusion")
    rb = resolve_rules(opts.get("rules"))
    depth = opts.get("depth", DEFAULT_PROVE_DEPTH, int)
    cfg = SearchConfig(d_max=depth, target=target, disabled_rules=_disabled(opts, rb))
    path = prove(start, target, rb, cfg)
    if path is None:
        print(f"NO DERIVATION within depth {depth}")
        return EXIT_FAIL
    print(format_path(path))
    return EXIT_OK


def _ratio(text: str) -> tuple[int, int]:
    p, sep, q = text.partition(":")
    if not sep:
        raise ValueError(f"ratio must look like P:N, got {text!r}")
    return int(p), int(q)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def cmd_gen_pairs(opts: Options) -> int:
    rb = resolve_rules(opts.get("rules"))
    counts = [opts.get(k, None, int) for k in ("train", "dev", "test")]
    if any(c is not None for c in counts) and not all(c is not None for c in counts):
        raise UsageError("--train, --dev and --test must be given together")
    mode = opts.get("mode", TEMPLATE)
    seeds = opts.get("seeds")
    if seeds and not Path(seeds).is_file():
        raise UsageError(f"seed file not found: {seeds}")
    llm_cfg = None
    if mode == LLM:
        try:
            llm_cfg = LLMConfig.from_env(
                endpoint=opts.get("llm_endpoint"), model=opts.get("llm_model"),
                temperature=opts.get("temperature", None, float),
            )
        except LLMError as e:
            raise UsageError(str(e)) from None
    try:
        cfg = PipelineConfig(
            seeds_path=Path(seeds) if seeds else None,
            d_max=opts.get("depth", DEFAULT_GEN_DEPTH, int),
            rules=rb,
            disabled_rules=_disabled(opts, rb),
            ratio=opts.get("ratio", (1, 1), _ratio),
            fractions=opts.get("fractions", None, _floats),
            counts=tuple(counts) if counts[0] is not None else None,
            seed=opts.get("seed", 42, int),
            out_dir=Path(opts.get("out", "dataset")),
            mode=mode,
            llm=llm_cfg,
            fallback_template=opts.get("fallback_template", False, _bool),
            jobs=opts.get("jobs", 1, int),
        )
    except ValueError as e:
        raise UsageError(str(e)) from None
    try:
        report = generate_dataset(cfg, log=lambda m: print(m, file=sys.stderr))
    except InsufficientPairs as e:
        raise UsageError(str(e)) from None
    except PurificationError as e:
        raise DomainError(f"cannot formalize seed: {e}") from None
    except LLMError as e:
        raise DomainError(f"LLM verbalization failed: {e}") from None
    except OSError as e:
        raise UsageError(f"{e.filename or ''}: {e.strerror or e}") from None
    for line in report.summary_lines():
        print(line)
    if opts.get("audit", False, _bool):
        bad = {name: audit_file(path) for name, path in report.paths.items()}
        violations = sum(len(v) for v in bad.values())
        for name, ids in bad.items():
            print(f"audit {name}: {len(report.splits[name]) - len(ids)} consistent, {len(ids)} violations")
        if violations:
            return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--rules", default=default, help="rule file (JSONL) or comma-separated builtin ids")
    p.add_argument("--seed", type=int, default=default, help="random seed (default 42)")
    p.add_argument("--depth", type=int, default=default, help="search depth bound")
    p.add_argument("--out", default=default, help="output file (explore) or directory (gen-pairs)")
    p.add_argument("--config", default=default, help="key = value configuration file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logicaug", description="Logic-driven contrastive data augmentation.")
    _global_flags(parser, None)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser("verify-rules", parents=[common], help="audit rule labels against truth tables")

    p = sub.add_parser("parse", parents=[common], help="formalize English sentences")
    p.add_argument("sentence", nargs="+")

    p = sub.add_parser("explore", parents=[common], help="enumerate reachable states as JSONL")
    p.add_argument("--formula", required=True)
    p.add_argument("--disable", help="comma-separated rule ids to switch off")
    p.add_argument("--max-results", type=int)

    p = sub.add_parser("derive", parents=[common], help="find and print a derivation")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--disable", help="comma-separated rule ids to switch off")

    p = sub.add_parser("gen-pairs", parents=[common], help="build train/dev/test JSONL datasets")
    p.add_argument("--seeds", help="seed statements, one per line (default: bundled set)")
    p.add_argument("--disable", help="comma-separated rule ids to switch off")
    p.add_argument("--ratio", type=_ratio, help="positive:negative ratio (default 1:1)")
    p.add_argument("--fractions", type=_floats, help="train,dev,test fractions summing to 1")
    for name in ("train", "dev", "test"):
        p.add_argument(f"--{name}", type=int, help=f"exact number of {name} pairs")
    p.add_argument("--mode", choices=(TEMPLATE, LLM))
    p.add_argument("--fallback-template", action="store_true", default=None,
                   help="use templates for pairs the LLM fails on")
    p.add_argument("--audit", action="store_true", default=None,
                   help="re-check every emitted label with the oracle")
    p.add_argument("--llm-endpoint")
    p.add_argument("--llm-model")
    p.add_argument("--temperature", type=float)
    p.add_argument("--jobs", type=int, help="worker processes for exploration (default 1)")
    return parser


COMMANDS = {
    "verify-rules": cmd_verify_rules,
    "parse": cmd_parse,
    "explore": cmd_explore,
    "derive": cmd_derive,
    "gen-pairs": cmd_gen_pairs,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.command](Options(args))
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
