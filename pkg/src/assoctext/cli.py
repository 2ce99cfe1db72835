"""Command-line entry point: mine, train, classify, evaluate, sweep.

Exit status is 0 on success, 1 when there is nothing to work with (empty
input, no mined sets, empty test corpus) and 2 on I/O or format errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import re
import sys
from fractions import Fraction
from pathlib import Path

from .apriori import find_frequent_itemsets, generate_rules, maximal_itemsets, read_transactions
from .classifier import classify, predict_from_counts
from .harness import (
    CorpusError,
    EmptyCorpusError,
    evaluate,
    format_sweep_csv,
    format_sweep_text,
    load_corpus,
    sweep,
    train_table,
)
from .model import ModelConfig, ModelFormatError, load_model, save_model
from .textprep import DEFAULT_STOPWORDS, extract_keywords, load_stopwords

EXIT_EMPTY = 1
EXIT_IO = 2

STOPWORDS_ENV = "ATC_STOPWORDS"

log = logging.getLogger("assoctext")


class CliError(Exception):
    def __init__(self, message, code=EXIT_IO):
        super().__init__(message)
        self.code = code


def fraction(text: str):
    """Parse ``0.05`` or ``2/9``; fractions stay exact."""
    try:
        value = Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}")
    if not 0 < value <= 1:
        raise argparse.ArgumentTypeError(f"must be in (0, 1]: {text!r}")
    return value


def positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return value


def fraction_list(text: str) -> list:
    values = [float(part) for part in text.split(",") if part.strip()]
    if not values or any(not 0 < v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"fractions must lie in (0, 1): {text!r}")
    return values


_COUNTS_RE = re.compile(r"^(?P<label>[^=]+)=(?P<p>\d+)/(?P<pval>\d+),(?P<n>\d+)/(?P<nval>\d+)$")


def count_tuple(text: str):
    m = _COUNTS_RE.match(text.strip())
    if not m:
        raise argparse.ArgumentTypeError(f"expected LABEL=p/pval,n/nval, got {text!r}")
    return m["label"], tuple(int(m[k]) for k in ("p", "pval", "n", "nval"))


def fmt(x) -> str:
    return f"{float(x):.6g}"


def _stopwords(args):
    path = args.stopwords or os.environ.get(STOPWORDS_ENV)
    if not path:
        return DEFAULT_STOPWORDS
    try:
        return load_stopwords(path)
    except (OSError, UnicodeDecodeError, ValueError) as exc:
        raise CliError(f"cannot read stopwords {path}: {exc}")


def _config(args) -> ModelConfig:
    return ModelConfig(
        float(args.min_support), float(args.min_confidence), args.min_doc_freq, float(args.match_threshold)
    )


def _load_model(path):
    try:
        return load_model(path)
    except ModelFormatError as exc:
        raise CliError(f"{path}: {exc}")
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read model {path}: {exc}")


def _load_corpus(root):
    try:
        return load_corpus(root)
    except EmptyCorpusError as exc:
        raise CliError(str(exc), EXIT_EMPTY)
    except CorpusError as exc:
        raise CliError(str(exc))


def cmd_mine(args, out) -> int:
    try:
        transactions = read_transactions(args.transactions)
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read transactions: {exc}")
    if not transactions:
        raise CliError("transaction file holds no transactions", EXIT_EMPTY)
    if args.min_count is not None:
        levels = find_frequent_itemsets(transactions, min_count=args.min_count)
    else:
        levels = find_frequent_itemsets(transactions, args.min_support)

    if args.rules is not None:
        for rule in generate_rules(levels, float(args.rules)):
            out.write(f"{rule}\t{fmt(rule.support)}\t{fmt(rule.confidence)}\n")
        return 0
    itemsets = maximal_itemsets(levels) if args.maximal else levels.counts()
    for items, count in sorted(itemsets.items(), key=lambda kv: (len(kv[0]), kv[0])):
        out.write(f"{','.join(items)}\t{count}\n")
    return 0


def cmd_train(args, out) -> int:
    corpus = _load_corpus(args.corpus)
    stops = _stopwords(args)
    try:
        table = train_table(corpus, _config(args), stops)
    except ValueError as exc:
        raise CliError(f"{exc}; try a lower --min-support", EXIT_EMPTY)
    for label in table.classes:
        if table.sets_per_class[label] == 0:
            log.warning("class %s yielded no word-sets; its prior is 0", label)
    try:
        save_model(table, args.model)
    except OSError as exc:
        raise CliError(f"cannot write model: {exc}")

    out.write(f"documents: {len(corpus)} ({corpus.skipped} entries skipped)\n")
    out.write(f"total sets: {table.total_sets}\n")
    out.write("class\tsets\tprior\n")
    for label in table.classes:
        out.write(f"{label}\t{table.sets_per_class[label]}\t{fmt(table.priors[label])}\n")
    return 0


def cmd_classify(args, out) -> int:
    table = _load_model(args.model)
    if args.scores_from_counts:
        counts = dict(args.scores_from_counts)
        if len(counts) != len(args.scores_from_counts):
            raise CliError("a class was given more than one count tuple")
        try:
            pred = predict_from_counts(table, counts)
        except ValueError as exc:
            raise CliError(str(exc))
    else:
        try:
            if args.input in (None, "-"):
                text = sys.stdin.read()
            else:
                text = Path(args.input).read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as exc:
            raise CliError(f"cannot read input: {exc}")
        keywords = extract_keywords(text, _stopwords(args), table.config.min_doc_freq)
        pred = classify(keywords, table)

    out.write(f"{pred.label}\n")
    for s in pred.scores:
        out.write(f"{s.label}\t{fmt(s.score)}\t{s.p}/{s.pval}\t{s.n}/{s.nval}\n")
    return 0


def _write_csv(path, text):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc}")


def cmd_evaluate(args, out) -> int:
    table = _load_model(args.model)
    corpus = _load_corpus(args.corpus)
    report = evaluate(table, corpus, _stopwords(args))
    out.write(report.to_text())
    out.write(f"accuracy%: {fmt(report.accuracy_percent)}\n")
    if args.csv:
        _write_csv(args.csv, report.to_csv())
    else:
        out.write("\n" + report.to_csv())
    return 0


def cmd_sweep(args, out) -> int:
    corpus = _load_corpus(args.corpus)
    try:
        rows = sweep(corpus, args.fractions, args.seed, _config(args), _stopwords(args))
    except CorpusError as exc:
        raise CliError(str(exc))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_EMPTY)
    out.write(format_sweep_text(rows, args.seed))
    if args.csv:
        _write_csv(args.csv, format_sweep_csv(rows))
    else:
        out.write("\n" + format_sweep_csv(rows))
    return 0


def _add_model_flags(p):
    d = ModelConfig()
    p.add_argument("--min-support", type=fraction, default=d.min_support)
    p.add_argument("--min-confidence", type=fraction, default=d.min_confidence)
    p.add_argument("--min-doc-freq", type=positive_int, default=d.min_doc_freq)
    p.add_argument("--match-threshold", type=fraction, default=d.match_threshold)


def _add_stopwords_flag(p):
    p.add_argument(
        "--stopwords", help=f"stopword file (default: ${STOPWORDS_ENV} or the built-in list)"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assoctext", description="Association word-set text classification."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="mine frequent itemsets from a transaction file")
    p.add_argument("transactions")
    p.add_argument("--min-support", type=fraction, default=Fraction(1, 20))
    p.add_argument("--min-count", type=positive_int, help="absolute support count (overrides --min-support)")
    p.add_argument("--maximal", action="store_true", help="print only maximal itemsets")
    p.add_argument("--rules", type=fraction, metavar="MIN_CONFIDENCE", help="print strong rules instead")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("train", help="train a model from a labelled corpus directory")
    p.add_argument("corpus")
    p.add_argument("--model", required=True, help="output model path")
    _add_model_flags(p)
    _add_stopwords_flag(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", help="classify one document")
    p.add_argument("--model", required=True)
    p.add_argument("input", nargs="?", help="document file; '-' or omitted reads stdin")
    p.add_argument(
        "--scores-from-counts",
        type=count_tuple,
        action="append",
        metavar="LABEL=p/pval,n/nval",
        help="debug: score from given count tuples instead of a document",
    )
    _add_stopwords_flag(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", help="evaluate a model on a labelled corpus")
    p.add_argument("--model", required=True)
    p.add_argument("corpus")
    p.add_argument("--csv", help="write the CSV report here instead of stdout")
    _add_stopwords_flag(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("sweep", help="accuracy versus training fraction")
    p.add_argument("corpus")
    p.add_argument("--fractions", type=fraction_list, default=[0.1, 0.2, 0.3, 0.4, 0.5])
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--csv", help="write the CSV table here instead of stdout")
    _add_model_flags(p)
    _add_stopwords_flag(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    out = out or sys.stdout
    try:
        return args.func(args, out)
    except CliError as exc:
        print(f"assoctext {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
