"""Command line driver: ingest dumps, compile and inspect quiz pools,
evaluate backends against gold fixtures, and serve the chat API.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import metrics
from .classify import BackendError, ExternalClassifier, FeedbackLabel, RuleClassifier
from .corpus import DumpFormatError, filter_feedback_posts, load_dump
from .index import FocusUnsatisfiableError
from .lexicon import ConceptLexicon
from .quiz import PoolError, compile_pool, load_overrides, load_pool, save_pool
from .segment import tokenize
from .summarize import analyze_comment
from .tagging import bio_sequence
from .corpus import Comment

USAGE_EXIT = 1
DATA_EXIT = 2


class DataError(RuntimeError):
    pass


class CliParser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.is_file():
        raise DataError(f"config file not found: {path}")
    if p.suffix == ".toml":
        try:
            import tomllib
        except ImportError as exc:
            raise DataError("TOML config needs Python >= 3.11; use JSON instead") from exc
        return tomllib.loads(p.read_text("utf-8"))
    try:
        return json.loads(p.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise DataError(f"config file is not valid JSON: {exc}") from exc


def _merge_config(args: argparse.Namespace, config: dict, command: str) -> None:
    """Fill unset flags from the config file (flags always win)."""
    layers = [config.get(command, {}), config]
    for key, value in vars(args).items():
        if value is not None:
            continue
        for layer in layers:
            if isinstance(layer, dict) and key in layer and not isinstance(layer[key], dict):
                setattr(args, key, layer[key])
                break


def _echo_seed(seed: int) -> None:
    print(f"effective seed: {seed}", file=sys.stderr)


def _lexicon(args) -> ConceptLexicon:
    if getattr(args, "lexicon", None):
        if not Path(args.lexicon).is_file():
            raise DataError(f"lexicon file not found: {args.lexicon}")
        try:
            return ConceptLexicon.from_file(args.lexicon)
        except (ValueError, KeyError) as exc:
            raise DataError(f"bad lexicon file: {exc}") from exc
    return ConceptLexicon.default()


def _ingest(args) -> int:
    _echo_seed(args.seed)
    try:
        result = load_dump(args.dump)
    except FileNotFoundError:
        raise DataError(f"dump file not found: {args.dump}")
    except DumpFormatError as exc:
        raise DataError(str(exc))
    if args.rejects:
        result.write_rejects(args.rejects)
    feedback = filter_feedback_posts(result.posts)
    summary = {
        "posts": len(result.posts),
        "comments": sum(1 for p in result.posts for _ in p.all_comments()),
        "rejects": len(result.rejects),
        "feedback_posts": len(feedback),
    }
    print(json.dumps(summary, indent=2, sort_keys=True))
    return 0


def _compile(args) -> int:
    seed = args.seed if args.seed is not None else 0
    _echo_seed(seed)
    lex = _lexicon(args)
    try:
        result = load_dump(args.dump)
    except FileNotFoundError:
        raise DataError(f"dump file not found: {args.dump}")
    except DumpFormatError as exc:
        raise DataError(str(exc))
    overrides = None
    if args.overrides:
        try:
            overrides = load_overrides(args.overrides)
        except FileNotFoundError:
            raise DataError(f"overrides file not found: {args.overrides}")
        except (PoolError, json.JSONDecodeError) as exc:
            raise DataError(str(exc))
    posts = filter_feedback_posts(result.posts)
    try:
        pool = compile_pool(posts, lex, rng_seed=seed, overrides=overrides)
    except PoolError as exc:
        raise DataError(str(exc))
    save_pool(pool, args.out)
    needs_review = [q.id for q in pool.quizzes if q.needs_review]
    print(
        json.dumps(
            {
                "quizzes": len(pool.quizzes),
                "by_cluster": pool.cluster_counts(),
                "needs_review": needs_review,
                "out": args.out,
            },
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def _load_pool(path: str):
    if not Path(path).is_file():
        raise DataError(f"pool file not found: {path}")
    try:
        return load_pool(path)
    except (PoolError, json.JSONDecodeError) as exc:
        raise DataError(f"bad pool file: {exc}")


def _stats(args) -> int:
    _echo_seed(args.seed)
    pool = _load_pool(args.pool)
    counts = pool.cluster_counts()
    print(
        json.dumps(
            {"total": len(pool.quizzes), "by_visual_cluster": counts},
            indent=2,
            sort_keys=True,
        )
    )
    return 0


def _review(args) -> int:
    _echo_seed(args.seed)
    pool = _load_pool(args.pool)
    flagged = [q for q in pool.quizzes if q.needs_review]
    listing = [
        {
            "id": q.id,
            "question": q.question_text,
            "answer": q.answer,
            "distractors": list(q.distractors),
        }
        for q in flagged
    ]
    print(json.dumps({"needs_review": listing, "count": len(listing)}, indent=2, sort_keys=True))
    return 0


def _eval_backend(args, lex):
    if args.backend == "rule":
        return RuleClassifier(lex)
    if args.backend == "external":
        if not args.backend_cmd:
            raise DataError("--backend external needs --backend-cmd")
        return ExternalClassifier(args.backend_cmd.split())
    raise DataError(f"unknown backend {args.backend!r}")


def _eval(args) -> int:
    _echo_seed(args.seed)
    lex = _lexicon(args)
    backend = _eval_backend(args, lex)
    if not Path(args.gold).is_file():
        raise DataError(f"gold file not found: {args.gold}")

    pred_labels: list[str] = []
    gold_labels: list[str] = []
    pred_tags: list[list[str]] = []
    gold_tags: list[list[str]] = []
    rouge_rows: list[dict] = []
    counts = {"sentences": 0, "tagged_sentences": 0, "comments": 0}

    with open(args.gold, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"gold line {line_no}: invalid JSON ({exc.msg})")
            kind = record.get("kind")
            if kind == "sentence":
                counts["sentences"] += 1
                if "label" in record:
                    try:
                        label, _conf = backend.classify(record["text"])
                    except BackendError as exc:
                        raise DataError(f"backend failed on gold line {line_no}: {exc}")
                    pred_labels.append(label.value)
                    gold_labels.append(record["label"])
                if "tags" in record:
                    tags = record["tags"]
                    if len(tags) != len(tokenize(record["text"])):
                        raise DataError(
                            f"gold line {line_no}: {len(tags)} tags for "
                            f"{len(tokenize(record['text']))} tokens"
                        )
                    counts["tagged_sentences"] += 1
                    pred_tags.append(bio_sequence(record["text"], lex))
                    gold_tags.append(tags)
            elif kind == "comment":
                counts["comments"] += 1
                comment = Comment(
                    id=record.get("id", f"gold-{line_no}"),
                    parent_id="gold",
                    author="gold",
                    body=record["body"],
                    created_at=0,
                )
                analyzed = analyze_comment(comment, backend, lex)
                summary_text = " ".join(
                    fs.sentence.text
                    for fs in analyzed.sentences
                    if fs.label is not FeedbackLabel.NONE
                )
                rouge_rows.append(metrics.rouge_scores(summary_text, record["summary"]))
            else:
                raise DataError(f"gold line {line_no}: unknown kind {kind!r}")

    report: dict = {"backend": args.backend, "counts": counts}
    if gold_labels:
        report["classification"] = metrics.classification_metrics(pred_labels, gold_labels)
    if gold_tags:
        report["tagging"] = metrics.tagging_metrics(pred_tags, gold_tags)
    if rouge_rows:
        averaged = {}
        for key in ("rouge1", "rouge2", "rougeL"):
            averaged[key] = {
                stat: sum(getattr(row[key], stat) for row in rouge_rows) / len(rouge_rows)
                for stat in ("precision", "recall", "f1")
            }
        report["rouge"] = averaged

    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    print(text)
    return 0


def _serve(args) -> int:
    import uvicorn

    from .server import create_app

    seed = args.seed
    if seed is None:
        print("effective seed: none (session seeds drawn from entropy)", file=sys.stderr)
    else:
        _echo_seed(seed)
    pool = _load_pool(args.pool)
    lex = _lexicon(args)
    if pool.lexicon_digest != lex.digest():
        raise DataError(
            "pool/lexicon digest mismatch; pass the lexicon the pool was compiled with "
            "via --lexicon"
        )
    host, _, port = args.bind.rpartition(":")
    if not host or not port.isdigit():
        raise DataError(f"--bind must look like HOST:PORT, got {args.bind!r}")
    app = create_app(
        pool,
        lex,
        images_dir=args.images_dir,
        data_dir=args.data_dir,
        server_seed=seed,
        ui_dir=args.ui_dir,
    )
    uvicorn.run(app, host=host, port=int(port), log_level="info")
    return 0


def build_parser() -> CliParser:
    parser = CliParser(prog="critiquiz", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON/TOML config file mirroring the flags")
        p.add_argument("--seed", type=int, default=None, help="seed echoed on every run")

    p_ingest = sub.add_parser("ingest", help="parse a JSONL dump and report rejects")
    common(p_ingest)
    p_ingest.add_argument("--dump", required=False)
    p_ingest.add_argument("--rejects", help="write the rejects report JSONL here")

    p_compile = sub.add_parser("compile", help="compile a quiz pool from a dump")
    common(p_compile)
    p_compile.add_argument("--dump", required=False)
    p_compile.add_argument("--lexicon", help="lexicon JSON (default: bundled)")
    p_compile.add_argument("--overrides", help="reviewed distractor overrides JSON")
    p_compile.add_argument("--out", required=False)

    p_stats = sub.add_parser("stats", help="per-cluster quiz counts for a pool")
    common(p_stats)
    p_stats.add_argument("--pool", required=False)

    p_review = sub.add_parser("review", help="list quizzes flagged needs_review")
    common(p_review)
    p_review.add_argument("--pool", required=False)

    p_eval = sub.add_parser("eval", help="score a backend against a gold JSONL file")
    common(p_eval)
    p_eval.add_argument("--gold", required=False)
    p_eval.add_argument("--backend", default=None, help="rule (default) or external")
    p_eval.add_argument("--backend-cmd", dest="backend_cmd", help="command for --backend external")
    p_eval.add_argument("--lexicon", help="lexicon JSON (default: bundled)")
    p_eval.add_argument("--out", help="also write the metrics report here")

    p_serve = sub.add_parser("serve", help="run the chat service")
    common(p_serve)
    p_serve.add_argument("--pool", required=False)
    p_serve.add_argument("--images-dir", dest="images_dir")
    p_serve.add_argument("--data-dir", dest="data_dir", default=None)
    p_serve.add_argument("--bind", default=None)
    p_serve.add_argument("--lexicon", help="lexicon JSON (default: bundled)")
    p_serve.add_argument("--ui-dir", dest="ui_dir", help="static frontend directory")

    return parser


_HANDLERS = {
    "ingest": _ingest,
    "compile": _compile,
    "stats": _stats,
    "review": _review,
    "eval": _eval,
    "serve": _serve,
}

_REQUIRED = {
    "ingest": ("dump",),
    "compile": ("dump", "out"),
    "stats": ("pool",),
    "review": ("pool",),
    "eval": ("gold",),
    "serve": ("pool",),
}

_DEFAULTS = {
    "ingest": {"seed": 0},
    "compile": {"seed": 0},
    "stats": {"seed": 0},
    "review": {"seed": 0},
    "eval": {"seed": 0, "backend": "rule"},
    "serve": {"bind": "127.0.0.1:8321", "data_dir": "data"},
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_config(args.config)
        _merge_config(args, config, args.command)
        for key, value in _DEFAULTS.get(args.command, {}).items():
            if getattr(args, key, None) is None:
                setattr(args, key, value)
        missing = [k for k in _REQUIRED[args.command] if getattr(args, k, None) is None]
        if missing:
            parser.error(f"{args.command} requires --" + ", --".join(m.replace("_", "-") for m in missing))
        return _HANDLERS[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT
    except FocusUnsatisfiableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
