"""Command-line front end: ``smtkit <subcommand> ...``.

Every subcommand prints a report on stdout (or to ``--output``). Reports
come as TSV or JSON; the line-by-line corpus transforms print plain text by
default. Options may also be given in a JSON file via ``--config``; flags
on the command line win over it.

Exit codes: 0 success, 1 validation failure, 2 failed expectation check,
3 I/O error. Failures also write a one-line JSON error record to stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Callable, Sequence

from . import __version__, lm, schemas
from .alignment import Heuristic, format_alignment, parse_alignment, parse_points, symmetrize
from .errors import LengthMismatch, SmtkitError, ValidationError
from .metrics import EvalPair, bleu, interpretability_band, meteor_corpus, nist, normalize_score, ter_corpus
from .reproduce import run_checks
from .stats import METRICS, icc_two_way_absolute, load_score_table, t_test, wilcoxon_matched_pairs
from .text import (
    CleanConfig,
    SentencePair,
    TruecaseModel,
    build_frequency_table,
    clean_corpus,
    decode_lines,
    detokenize,
    normalize_punctuation,
    split_compounds,
    tokenize,
    train_truecaser,
    truecase,
)

TOOL = "smtkit"
EXIT_OK, EXIT_INVALID, EXIT_EXPECTATION, EXIT_IO = 0, 1, 2, 3
# argparse bookkeeping that is not part of the run configuration
_NOT_CONFIG = {"config", "output", "func"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


class _Run:
    """Per-invocation state: parsed options plus digests of every file read."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inputs: list[schemas.InputDigest] = []

    def read_bytes(self, path: str) -> bytes:
        data = Path(path).read_bytes()
        self.inputs.append(schemas.InputDigest(path=path, sha256=hashlib.sha256(data).hexdigest()))
        return data

    def read_lines(self, path: str) -> list[str]:
        return [line.text for line in decode_lines(self.read_bytes(path))]

    def config(self) -> dict:
        return {k: v for k, v in sorted(vars(self.args).items()) if k not in _NOT_CONFIG}

    def provenance(self) -> schemas.Provenance:
        config = self.config()
        canonical = json.dumps(config, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return schemas.Provenance(
            tool=TOOL, version=__version__, command=self.args.command,
            config_sha256=hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
            config=config, inputs=self.inputs)

    def tsv_header(self, prov: schemas.Provenance) -> list[str]:
        lines = [f"# {prov.tool} {prov.version} {prov.command}",
                 f"# config_sha256={prov.config_sha256}"]
        lines.extend(f"# input {d.path} sha256={d.sha256}" for d in prov.inputs)
        return lines


def _tokens(line: str, run: _Run) -> list[str]:
    if getattr(run.args, "lowercase", False):
        line = line.lower()
    if getattr(run.args, "tokenize", False):
        return tokenize(normalize_punctuation(line))
    return line.split()


def _same_length(named: dict[str, list]) -> None:
    sizes = {name: len(v) for name, v in named.items()}
    if len(set(sizes.values())) > 1:
        raise LengthMismatch("line counts differ: " + ", ".join(f"{k}={v}" for k, v in sizes.items()))


# -- subcommands ------------------------------------------------------------------
# Each returns (report, rows) where rows are the tab-separated or plain-text
# lines printed in the non-JSON formats.


def cmd_clean(run: _Run):
    a = run.args
    config = CleanConfig(max_tokens=a.max_tokens, max_length_ratio=a.max_length_ratio,
                         foreign_char_ratio=a.foreign_char_ratio, drop_duplicates=a.drop_duplicates,
                         require_terminal_punct=a.require_terminal_punct,
                         source_script=a.source_script, target_script=a.target_script)
    src, tgt = run.read_lines(a.source), run.read_lines(a.target)
    _same_length({a.source: src, a.target: tgt})
    pairs = [SentencePair(s.split(), t.split(), i) for i, (s, t) in enumerate(zip(src, tgt), 1)]
    kept, dropped = clean_corpus(pairs, config)
    if a.kept_source:
        _write(a.kept_source, "".join(detokenize(p.source) + "\n" for p in kept))
    if a.kept_target:
        _write(a.kept_target, "".join(detokenize(p.target) + "\n" for p in kept))
    report = schemas.CleanReport(
        provenance=run.provenance(), total=len(pairs), kept=len(kept),
        dropped=[schemas.Drop(pair_id=pid, reason=r.value) for pid, r in dropped])
    rows = ["pair_id\treason"] + [f"{pid}\t{r.value}" for pid, r in dropped]
    return report, rows


def _corpus_report(run: _Run, lines: list[str]):
    return schemas.CorpusReport(provenance=run.provenance(), lines=lines), lines


def cmd_tokenize(run: _Run):
    a = run.args
    out = []
    for line in run.read_lines(a.input):
        if a.normalize_punct:
            line = normalize_punctuation(line)
        out.append(detokenize(tokenize(line)))
    return _corpus_report(run, out)


def cmd_truecase(run: _Run):
    a = run.args
    sentences = [line.split() for line in run.read_lines(a.input)]
    if a.model:
        try:
            model = TruecaseModel.from_dict(json.loads(run.read_bytes(a.model)))
        except (ValueError, KeyError, TypeError, AttributeError) as exc:
            raise ValidationError(f"bad truecase model {a.model}: {exc}") from None
    else:
        corpus = [line.split() for line in run.read_lines(a.train)] if a.train else sentences
        model = train_truecaser(corpus)
    if a.save_model:
        _write(a.save_model, json.dumps(model.to_dict(), indent=1, ensure_ascii=False) + "\n")
    return _corpus_report(run, [detokenize(truecase(s, model)) for s in sentences])


def cmd_split_compounds(run: _Run):
    a = run.args
    sentences = [line.split() for line in run.read_lines(a.input)]
    counts = [line.split() for line in run.read_lines(a.counts)] if a.counts else sentences
    table = build_frequency_table(counts)
    out = []
    for sentence in sentences:
        tokens = []
        for tok in sentence:
            tokens.extend(split_compounds(tok, table, a.min_part_len, a.filler or ()))
        out.append(detokenize(tokens))
    return _corpus_report(run, out)


def cmd_symmetrize(run: _Run):
    a = run.args
    fwd_lines, rev_lines = run.read_lines(a.forward), run.read_lines(a.reverse)
    named = {a.forward: fwd_lines, a.reverse: rev_lines}
    src = run.read_lines(a.source) if a.source else None
    tgt = run.read_lines(a.target) if a.target else None
    if src is not None:
        named[a.source] = src
    if tgt is not None:
        named[a.target] = tgt
    _same_length(named)
    out = []
    for i, (f_text, r_text) in enumerate(zip(fwd_lines, rev_lines)):
        f_pts = parse_points(f_text)
        r_pts = [(s, t) for t, s in parse_points(r_text)] if a.reverse_transposed else parse_points(r_text)
        pts = f_pts + r_pts
        n_src = len(src[i].split()) if src is not None else max([s + 1 for s, _ in pts], default=1)
        n_tgt = len(tgt[i].split()) if tgt is not None else max([t + 1 for _, t in pts], default=1)
        fwd = parse_alignment(f_text, n_src, n_tgt)
        rev = parse_alignment(r_text, n_src, n_tgt, transpose=a.reverse_transposed)
        out.append(format_alignment(symmetrize(fwd, rev, a.heuristic).points))
    report = schemas.SymmetrizeReport(provenance=run.provenance(), heuristic=a.heuristic,
                                      alignments=out)
    return report, out


def cmd_lm_train(run: _Run):
    a = run.args
    corpus = [line.split() for line in run.read_lines(a.corpus)]
    model = lm.train(corpus, a.order, a.smoothing, a.boundaries)
    text = lm.dumps(model)
    report = schemas.LmTrainReport(
        provenance=run.provenance(), order=model.order, smoothing=model.smoothing.value,
        boundaries=model.boundaries, vocab_size=len(model.vocab), discounts=model.discounts,
        degenerate=model.degenerate, model=text)
    return report, text.splitlines()


def cmd_lm_ppl(run: _Run):
    a = run.args
    models = []
    for path in a.models:
        models.append(lm.loads(run.read_bytes(path).decode("utf-8")))
    test = [line.split() for line in run.read_lines(a.test)]
    if len(models) == 1:
        if a.weights or a.tune:
            raise ValidationError("weights and tuning need two or more models")
        model, weights = models[0], [1.0]
    else:
        if a.weights and a.tune:
            raise ValidationError("give either --weights or --tune, not both")
        if a.weights:
            weights = list(a.weights)
        elif a.tune:
            heldout = [line.split() for line in run.read_lines(a.tune)]
            weights, _ = lm.tune_weights(models, heldout, a.step)
        else:
            weights = [1.0 / len(models)] * len(models)
        model = lm.interpolate(models, weights)
    pp = lm.perplexity(model, test)
    tokens = sum(len(s) + model.boundaries for s in test)
    report = schemas.LmPplReport(provenance=run.provenance(), models=list(a.models),
                                 weights=weights, tokens=tokens, perplexity=pp)
    rows = ["models\tweights\ttokens\tperplexity",
            f"{','.join(a.models)}\t{','.join(f'{w:g}' for w in weights)}\t{tokens}\t{pp:.6f}"]
    return report, rows


def _metric_rows(pairs: list[EvalPair], run: _Run) -> list[schemas.MetricRow]:
    a = run.args
    wanted = a.metric or ["all"]
    names = list(METRICS) if "all" in wanted else [m for m in METRICS if m in wanted]
    rows = []
    for name in names:
        if name == "bleu":
            r = bleu(pairs, level=a.level)
            raw = r.score
            detail = {"precisions": r.precisions, "brevity_penalty": r.brevity_penalty,
                      "candidate_length": r.candidate_length, "reference_length": r.reference_length,
                      "matches": r.matches, "totals": r.totals}
        elif name == "nist":
            r = nist(pairs)
            raw = r.score
            detail = {"order_scores": r.order_scores, "brevity": r.brevity,
                      "candidate_length": r.candidate_length, "reference_length": r.reference_length}
        elif name == "meteor":
            r = meteor_corpus(pairs)
            raw = r.score
            detail = {"matches": r.matches, "chunks": r.chunks, "precision": r.precision,
                      "recall": r.recall, "fmean": r.fmean, "penalty": r.penalty}
        else:
            r = ter_corpus(pairs)
            raw = r.score
            detail = {"insertions": r.insertions, "deletions": r.deletions,
                      "substitutions": r.substitutions, "shifts": r.shifts,
                      "reference_length": r.reference_length, "exact_search": r.exact}
        normalized = normalize_score(name, raw).normalized if (a.normalize or a.band) else None
        rows.append(schemas.MetricRow(
            metric=name, raw=raw, normalized=normalized if a.normalize else None,
            band=interpretability_band(normalized).value if a.band else None, detail=detail))
    return rows


def cmd_score(run: _Run):
    a = run.args
    cand = run.read_lines(a.candidate)
    refs = [run.read_lines(p) for p in a.references]
    _same_length({a.candidate: cand, **{p: r for p, r in zip(a.references, refs)}})
    if not cand:
        raise ValidationError(f"{a.candidate} has no segments")
    pairs = [EvalPair(_tokens(c, run), [_tokens(r[i], run) for r in refs])
             for i, c in enumerate(cand)]
    scores = _metric_rows(pairs, run)
    report = schemas.ScoreReport(provenance=run.provenance(), segments=len(pairs),
                                 references=len(refs), level=a.level, scores=scores)
    rows = ["metric\traw\tnormalized\tband"]
    for s in scores:
        norm = f"{s.normalized:.2f}" if s.normalized is not None else "-"
        rows.append(f"{s.metric}\t{s.raw:.6f}\t{norm}\t{s.band or '-'}")
    return report, rows


def _sig_row(test: str, x: str, y: str, rep) -> schemas.SignificanceRow:
    return schemas.SignificanceRow(
        test=test, x=x, y=y, n=rep.n, statistic=rep.statistic, p_value=rep.p_value,
        effect=rep.effect, standard_error=rep.standard_error, df=rep.df, alpha=rep.alpha,
        significant=rep.significant)


def cmd_compare(run: _Run):
    a = run.args
    if len(a.tables) > 2:
        raise ValidationError("compare takes one or two score tables")
    tables = []
    for path in a.tables:
        tables.append(load_score_table_from(run, path))
    names = [Path(p).name for p in a.tables]
    mode = a.mode or ("paired" if len(tables) == 1 else "unpaired-pooled")
    # (x label, y label, x values, y values, paired x, paired y)
    comparisons = []
    if len(tables) == 1:
        t, name = tables[0], names[0]
        for other in METRICS[1:]:
            comparisons.append((f"{name}:bleu", f"{name}:{other}", t.column("bleu"),
                                t.column(other), t.column("bleu"), t.column(other)))
    else:
        (t1, t2), (n1, n2) = tables, names
        shared = [s for s in t1.systems if s in t2.rows]
        for m in METRICS:
            comparisons.append((f"{n1}:{m}", f"{n2}:{m}", t1.column(m), t2.column(m),
                                [t1.rows[s][m] for s in shared], [t2.rows[s][m] for s in shared]))
    tests, iccs = [], []
    if a.test == "icc":
        if len(tables) == 1:
            t = tables[0]
            matrix = [[t.rows[s][m] for m in METRICS] for s in t.systems]
            iccs.append((f"{names[0]}:{','.join(METRICS)}", icc_two_way_absolute(matrix)))
        else:
            for x, y, _, _, px, py in comparisons:
                iccs.append((f"{x} vs {y}", icc_two_way_absolute([list(p) for p in zip(px, py)])))
    else:
        for x, y, fx, fy, px, py in comparisons:
            if a.test == "wilcoxon":
                tests.append(_sig_row("wilcoxon", x, y, wilcoxon_matched_pairs(px, py, a.alpha)))
            elif mode == "paired":
                tests.append(_sig_row("t-test (paired)", x, y, t_test(px, py, "paired", a.alpha)))
            else:
                tests.append(_sig_row("t-test (unpaired-pooled)", x, y,
                                      t_test(fx, fy, "unpaired-pooled", a.alpha)))
    icc_rows = [schemas.IccRow(comparison=c, subjects=r.subjects, raters=r.raters,
                               icc_single=r.icc_single, icc_average=r.icc_average,
                               ms_rows=r.ms_rows, ms_columns=r.ms_columns, ms_error=r.ms_error)
                for c, r in iccs]
    report = schemas.CompareReport(provenance=run.provenance(), test=a.test, tests=tests,
                                   icc=icc_rows)
    if a.test == "icc":
        rows = ["comparison\tsubjects\traters\ticc_single\ticc_average"]
        rows += [f"{r.comparison}\t{r.subjects}\t{r.raters}\t{r.icc_single:.6f}\t{r.icc_average:.6f}"
                 for r in icc_rows]
    else:
        rows = ["test\tx\ty\tn\tstatistic\tp_value\teffect\tstandard_error\tsignificant"]
        rows += [f"{r.test}\t{r.x}\t{r.y}\t{r.n}\t{r.statistic:.6g}\t{r.p_value:.6f}\t"
                 f"{r.effect:.6f}\t{r.standard_error:.6f}\t{'yes' if r.significant else 'no'}"
                 for r in tests]
    return report, rows


def load_score_table_from(run: _Run, path: str):
    run.read_bytes(path)
    return load_score_table(path)


def cmd_reproduce(run: _Run):
    a = run.args
    pl_en = load_score_table_from(run, a.table1) if a.table1 else None
    en_pl = load_score_table_from(run, a.table2) if a.table2 else None
    checks = run_checks(pl_en, en_pl)
    report = schemas.ReproduceReport(
        provenance=run.provenance(), passed=not any(c.failed for c in checks),
        checks=[schemas.CheckRow(name=c.name, expected=c.expected, observed=c.observed,
                                 status=c.status) for c in checks])
    rows = ["check\texpected\tobserved\tstatus"]
    rows += [f"{c.name}\t{c.expected}\t{c.observed}\t{c.status}" for c in checks]
    return report, rows


# -- parser -----------------------------------------------------------------------


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = _Parser(prog=TOOL, description="Statistical MT corpus preparation, "
                     "language modelling, evaluation metrics and score statistics.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    subs: dict[str, argparse.ArgumentParser] = {}

    def add(name: str, func: Callable, help: str, report: bool = True):
        p = sub.add_parser(name, help=help, description=help)
        p.set_defaults(func=func)
        p.add_argument("--config", help="JSON file of option values (flags win)")
        p.add_argument("-o", "--output", help="write the report here instead of stdout")
        formats = ["tsv", "json"] if report else ["text", "json"]
        p.add_argument("--format", choices=formats, default=formats[0])
        subs[name] = p
        return p

    p = add("clean", cmd_clean, "Filter a tokenized parallel corpus and report dropped pairs.")
    p.add_argument("source")
    p.add_argument("target")
    defaults = CleanConfig()
    p.add_argument("--max-tokens", type=int, default=defaults.max_tokens)
    p.add_argument("--max-length-ratio", type=float, default=defaults.max_length_ratio)
    p.add_argument("--foreign-char-ratio", type=float, default=defaults.foreign_char_ratio)
    p.add_argument("--drop-duplicates", action=argparse.BooleanOptionalAction,
                   default=defaults.drop_duplicates)
    p.add_argument("--require-terminal-punct", action=argparse.BooleanOptionalAction,
                   default=defaults.require_terminal_punct)
    p.add_argument("--source-script", default=defaults.source_script)
    p.add_argument("--target-script", default=defaults.target_script)
    p.add_argument("--kept-source", help="write surviving source sentences here")
    p.add_argument("--kept-target", help="write surviving target sentences here")

    p = add("tokenize", cmd_tokenize, "Normalize punctuation and tokenize one sentence per line.",
            report=False)
    p.add_argument("input")
    p.add_argument("--normalize-punct", action=argparse.BooleanOptionalAction, default=True)

    p = add("truecase", cmd_truecase, "Restore the usual casing of sentence-initial words.",
            report=False)
    p.add_argument("input")
    p.add_argument("--train", help="tokenized corpus to learn casing from (default: input)")
    p.add_argument("--model", help="previously saved truecasing model (JSON)")
    p.add_argument("--save-model", help="write the learned model here")

    p = add("split-compounds", cmd_split_compounds,
            "Split compound words into frequent known parts.", report=False)
    p.add_argument("input")
    p.add_argument("--counts", help="tokenized corpus for word frequencies (default: input)")
    p.add_argument("--min-part-len", type=int, default=3)
    p.add_argument("--filler", action="append", help="linking morpheme allowed between parts")

    p = add("symmetrize", cmd_symmetrize, "Merge two directed word alignments.", report=False)
    p.add_argument("forward")
    p.add_argument("reverse")
    p.add_argument("--heuristic", choices=[h.value for h in Heuristic],
                   default=Heuristic.GrowDiagFinal.value)
    p.add_argument("--reverse-transposed", action="store_true",
                   help="reverse file lists target-source pairs")
    p.add_argument("--source", help="source sentences, for sentence lengths")
    p.add_argument("--target", help="target sentences, for sentence lengths")

    p = add("lm-train", cmd_lm_train, "Train a smoothed n-gram language model.", report=False)
    p.add_argument("corpus")
    p.add_argument("--order", type=int, default=5)
    p.add_argument("--smoothing", choices=[s.value for s in lm.Smoothing],
                   default=lm.Smoothing.KneserNey.value)
    p.add_argument("--boundaries", action=argparse.BooleanOptionalAction, default=True)

    p = add("lm-ppl", cmd_lm_ppl, "Perplexity of one model or a linear mixture on a test set.")
    p.add_argument("test")
    p.add_argument("models", nargs="+")
    p.add_argument("--weights", type=float, nargs="+")
    p.add_argument("--tune", help="held-out corpus for grid-searching mixture weights")
    p.add_argument("--step", type=float, default=0.05)

    p = add("score", cmd_score, "Score a candidate file against one or more references.")
    p.add_argument("candidate")
    p.add_argument("references", nargs="+")
    p.add_argument("--metric", action="append", choices=[*METRICS, "all"])
    p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--band", action="store_true", help="add the interpretability band")
    p.add_argument("--tokenize", action="store_true", help="tokenize raw text first")
    p.add_argument("--lowercase", action="store_true")
    p.add_argument("--level", choices=["corpus", "sentence-geometric"], default="corpus")

    p = add("compare", cmd_compare, "Significance tests or ICC on metric score tables.")
    p.add_argument("tables", nargs="+")
    p.add_argument("--test", choices=["wilcoxon", "ttest", "icc"], default="wilcoxon")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--mode", choices=["paired", "unpaired-pooled"],
                   help="t-test variant (default: paired for one table, pooled for two)")

    p = add("reproduce-paper", cmd_reproduce,
            "Recompute the published table statistics and check them.")
    p.add_argument("--table1", help="PL-EN score table (default: packaged copy)")
    p.add_argument("--table2", help="EN-PL score table (default: packaged copy)")
    return parser, subs


def _load_config(path: str, sub: argparse.ArgumentParser) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ValidationError(f"config {path}: expected a JSON object")
    actions = {a.dest: a for a in sub._actions
               if a.option_strings and a.dest not in ("help", "config")}
    out = {}
    for key, value in data.items():
        dest = key.replace("-", "_")
        action = actions.get(dest)
        if action is None:
            raise ValidationError(f"config {path}: unknown key {key!r}")
        values = value if isinstance(value, list) else [value]
        if action.choices is not None and any(v not in action.choices for v in values):
            raise ValidationError(f"config {path}: invalid value for {key!r}: {value!r}")
        out[dest] = value
    return out


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser, subs = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(argv)
    if args.config:
        sub = subs[args.command]
        sub.set_defaults(**_load_config(args.config, sub))
        args = parser.parse_args(argv)
    return args


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _error(exc: BaseException, code: int) -> int:
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    sys.stderr.write(json.dumps(record, ensure_ascii=False) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = parse_args(argv)
        run = _Run(args)
        report, rows = args.func(run)
        if args.format == "json":
            text = report.model_dump_json(indent=2) + "\n"
        elif args.format == "tsv":
            text = "\n".join(run.tsv_header(report.provenance) + rows) + "\n"
        else:
            text = "".join(row + "\n" for row in rows)
        if args.output:
            _write(args.output, text)
        else:
            sys.stdout.write(text)
    except SmtkitError as exc:
        return _error(exc, EXIT_INVALID)
    except OSError as exc:
        return _error(exc, EXIT_IO)
    if isinstance(report, schemas.ReproduceReport) and not report.passed:
        return EXIT_EXPECTATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
