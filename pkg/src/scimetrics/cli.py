"""Batch command-line front end.

Settings come from (lowest to highest precedence) built-in defaults, a
``key = value`` config file given by ``--config``, ``IA_*`` environment
variables, and command-line flags.  Exit status is 0 on success, 1 on usage
errors and 2 on data errors.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
import warnings
from dataclasses import dataclass, field, fields

from . import author_metrics, field_metrics, journal_metrics, ranking, rating, recommender, review
from .corpus import Corpus, author_papers, citation_count, citations_in_year, corpus_files, load_corpus, paper_age
from .errors import ScimetricsError

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
ENV_PREFIX = "IA_"


@dataclass
class RunConfig:
    corpus: list[str] = field(default_factory=list)
    now_year: int | None = None
    format: str = "json"
    strict: bool = False
    seed: int = 0
    gamma: float = author_metrics.CONTEMPORARY_GAMMA
    delta: float = author_metrics.CONTEMPORARY_DELTA
    jif_window: int = journal_metrics.JIF_WINDOW
    ef_window: int = journal_metrics.EIGENFACTOR_WINDOW
    damping: float = journal_metrics.DAMPING
    tol: float = 1e-12
    max_iter: int = 10_000
    scale_min: int = 1
    scale_max: int = 5
    monthly_budget: int = 30
    saturation_count: int = 10
    reputation_damping: float = 0.5
    reputation_tol: float = 1e-9
    threshold: float = review.REPUTATION_THRESHOLD
    min_overlap: int = 10
    z_threshold: float = 3.0

    def validate(self) -> None:
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        if not 0 < self.damping < 1 or not 0 < self.reputation_damping < 1:
            raise UsageError("damping values must lie in (0, 1)")
        if self.gamma <= 0 or self.delta < 0:
            raise UsageError("need gamma > 0 and delta >= 0")
        if self.jif_window < 1 or self.ef_window < 1:
            raise UsageError("windows must be >= 1")

    def rating_config(self) -> rating.RatingConfig:
        return rating.RatingConfig(scale_min=self.scale_min, scale_max=self.scale_max,
                                   monthly_budget=self.monthly_budget, saturation_count=self.saturation_count)


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


def _coerce(name: str, raw):
    f = {f.name: f for f in fields(RunConfig)}.get(name)
    if f is None:
        raise UsageError(f"unknown setting {name!r}")
    if name == "corpus":
        return [p for p in str(raw).split(",") if p] if isinstance(raw, str) else list(raw)
    kind = f.type if isinstance(f.type, str) else f.type.__name__
    try:
        if kind.startswith("bool"):
            return str(raw).strip().lower() in ("1", "true", "yes", "on")
        if kind.startswith("int"):
            return int(raw)
        if kind.startswith("float"):
            return float(raw)
    except ValueError:
        raise UsageError(f"bad value {raw!r} for {name}") from None
    return str(raw)


def read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_string("[run]\n" + fh.read(), source=path)
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    return {k.replace("-", "_"): _coerce(k.replace("-", "_"), v) for k, v in parser["run"].items()}


def resolve_config(args: argparse.Namespace, environ=None) -> RunConfig:
    environ = os.environ if environ is None else environ
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    for f in fields(RunConfig):
        key = ENV_PREFIX + f.name.upper()
        if key in environ:
            values[f.name] = _coerce(f.name, environ[key])
    for name in ("corpus", "now_year", "format", "seed"):
        v = getattr(args, name, None)
        if v is not None:
            values[name] = _coerce(name, v)
    if getattr(args, "strict", None):
        values["strict"] = True
    cfg = RunConfig(**values)
    cfg.validate()
    return cfg


# -- output --------------------------------------------------------------------

def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(_flatten(v, key + "."))
        elif isinstance(v, (list, tuple)):
            out[key] = json.dumps(v, sort_keys=True, ensure_ascii=False)
        else:
            out[key] = "" if v is None else v
    return out


def render(result, fmt: str) -> str:
    """Serialize a result as one JSON document or as RFC 4180 CSV."""
    if fmt == "json":
        return json.dumps(result, sort_keys=True, ensure_ascii=False, indent=2) + "\n"
    rows = result if isinstance(result, list) else [result]
    rows = [_flatten(r) if isinstance(r, dict) else {"value": r} for r in rows]
    header = sorted({k for r in rows for k in r})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, restval="")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


# -- commands ----------------------------------------------------------------

def _corpus(cfg: RunConfig, paths=None) -> Corpus:
    paths = paths or cfg.corpus
    if not paths or not corpus_files(paths):
        raise DataError("no corpus files")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return load_corpus(paths, strict=cfg.strict)


def _now_year(cfg: RunConfig, corpus: Corpus) -> int:
    if cfg.now_year is not None:
        return cfg.now_year
    years = [p.year for p in corpus.papers.values()]
    if not years:
        raise DataError("empty corpus and no --now-year")
    return max(years)


def cmd_ingest(cfg, args):
    return _corpus(cfg, args.paths).summary()


def cmd_metrics(cfg, args):
    corpus = _corpus(cfg)
    now = _now_year(cfg, corpus)
    if args.kind == "author":
        out = author_metrics.author_report(corpus, args.id, now, cfg.gamma, cfg.delta).as_dict()
        out["author_id"] = args.id
        ranked = author_papers(corpus, args.id)
        if args.field:
            consts = field_metrics.field_constants(corpus, args.field)
            out["h_f"] = field_metrics.hf_index([c for _, c in ranked], consts)
        if args.papers:
            out["papers"] = [{"paper_id": p.id, "year": p.year, "citations": c} for p, c in ranked]
        return out
    if args.kind == "journal":
        return journal_metrics.journal_report(corpus, args.id, now, cfg.jif_window, cfg.ef_window,
                                              cfg.damping, cfg.tol, cfg.max_iter)
    if args.kind == "topic":
        return field_metrics.hb_index(corpus, args.id, now).as_dict()
    if args.kind == "field":
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            out = {"field_id": args.id, "ref_year": now,
                   "aggregate_impact_factor": journal_metrics.aggregate_impact_factor(corpus, args.id, now, cfg.jif_window)}
        try:
            c = field_metrics.field_constants(corpus, args.id)
            out.update(c0=c.c0, r0=c.r0)
        except ScimetricsError:
            out.update(c0=None, r0=None)
        out["warnings"] = sorted({str(w.message) for w in caught})
        return out
    # paper
    p = corpus.paper(args.id)
    by_year = {}
    for c in corpus.cited_by[p.id]:
        y = corpus.papers[c].year
        by_year[str(y)] = citations_in_year(corpus, p.id, y)
    return {"paper_id": p.id, "year": p.year, "age": paper_age(p, now) if now >= p.year else None,
            "citations": citation_count(corpus, p.id), "citations_by_year": by_year}


def cmd_cocited(cfg, args):
    corpus = _corpus(cfg)
    if args.pair:
        a, b = args.pair
        return {"a": a, "b": b, "count": field_metrics.co_citation_count(corpus, a, b)}
    return [{"a": a, "b": b, "count": n} for (a, b), n in field_metrics.top_cocited_pairs(corpus, args.top)]


def cmd_rank(cfg, args):
    matrix = ranking.ScoreMatrix.from_csv(args.matrix)
    if args.mode == "league":
        y = args.y
        return [{"candidate_id": a.candidate_id, "league": a.league}
                for a in ranking.league_classify(matrix, y, 2 * y if args.y_b is None else args.y_b,
                                                 3 * y if args.y_c is None else args.y_c)]
    if args.weights is None:
        raise UsageError("--weights is required for weighted and talent modes")
    try:
        w = ranking.WeightVector(tuple(float(x) for x in args.weights.split(",")))
    except ValueError as exc:
        raise UsageError(f"bad --weights: {exc}") from None
    if len(w) != len(matrix.criteria_ids):
        raise UsageError(f"{len(w)} weights for {len(matrix.criteria_ids)} criteria")
    return [{"rank": i, "candidate_id": c, "score": s}
            for i, (c, s) in enumerate(ranking.rank_candidates(matrix, w, args.mode), start=1)]


def _store(cfg, args):
    return rating.replay_log(args.ratings, cfg.rating_config())


def cmd_reputation(cfg, args):
    store = _store(cfg, args)
    corpus = _corpus(cfg)
    authored = {a: corpus.papers_by_author(a) for a in sorted({a for p in corpus.papers.values() for a in p.author_ids})}
    reps = rating.compute_reputation(store, authored, cfg.reputation_damping, cfg.reputation_tol,
                                     now=store.latest_timestamp())
    return [{"user_id": u, "reputation": r} for u, r in sorted(reps.items())]


def cmd_anomalies(cfg, args):
    store = _store(cfg, args)
    return [{"user_id": u, "z_score": z} for u, z in rating.detect_anomalies(store, cfg.min_overlap, cfg.z_threshold)]


def cmd_aggregate(cfg, args):
    store = _store(cfg, args)
    return rating.aggregate_item(store, args.item, now=store.latest_timestamp()).as_dict()


def cmd_review(cfg, args):
    desk = review.ReviewDesk(threshold=cfg.threshold, allow_rereview=args.allow_rereview).replay(args.event_log)
    return {
        "manuscripts": {m: {"state": wf.state.value, "round": wf.round} for m, wf in sorted(desk.workflows.items())},
        "transitions": [t.to_dict() for t in desk.transitions()],
    }


def cmd_recommend(cfg, args):
    corpus = _corpus(cfg)
    fn = recommender.tag_similarity if args.by == "tags" else recommender.coaccess_similarity
    return [{"paper_id": p, "score": s} for p, s in fn(corpus, args.paper, args.k)]


def cmd_display_order(cfg, args):
    corpus = _corpus(cfg)
    pops = recommender.popularity(corpus)
    order = recommender.randomized_display(list(pops.items()), args.temperature, cfg.seed)
    return [{"position": i, "paper_id": p, "popularity": pops[p]} for i, p in enumerate(order.item_ids, start=1)]


def cmd_alerts(cfg, args):
    corpus = _corpus(cfg)
    subs = recommender.load_subscriptions(args.subscriptions)
    papers = [p for _, p in sorted(corpus.papers.items()) if args.since is None or p.year >= args.since]
    return [{"user_id": u, "paper_id": p} for u, p in recommender.alerts(subs, papers)]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _global_options(parser: argparse.ArgumentParser, default) -> None:
    parser.add_argument("--config", default=default, help="key=value settings file")
    parser.add_argument("--format", choices=("json", "csv"), default=default)
    parser.add_argument("--strict", action="store_true", default=default,
                        help="treat dangling references as errors")
    parser.add_argument("--now-year", type=int, dest="now_year", default=default)
    parser.add_argument("--seed", type=int, default=default)
    parser.add_argument("--corpus", action="append", default=default, help="corpus file or directory (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="scimetrics", description="Citation indices, rankings, ratings and review workflows.")
    _global_options(p, None)
    # the same flags are accepted after the subcommand and then take precedence
    common = _Parser(add_help=False)
    _global_options(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ingest", parents=[common], help="validate a corpus and print a summary")
    s.add_argument("paths", nargs="*")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("metrics", parents=[common], help="indices for an author, journal, topic, field or paper")
    s.add_argument("kind", choices=("author", "journal", "topic", "field", "paper"))
    s.add_argument("id")
    s.add_argument("--field", help="author: also compute h_f against this field")
    s.add_argument("--papers", action="store_true", help="author: list ranked papers")
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("cocited", parents=[common], help="co-citation counts")
    s.add_argument("--pair", nargs=2, metavar=("A", "B"))
    s.add_argument("--top", type=int, default=10)
    s.set_defaults(func=cmd_cocited)

    s = sub.add_parser("rank", parents=[common], help="pluralistic ranking of a candidates x criteria CSV")
    s.add_argument("matrix")
    s.add_argument("--weights")
    s.add_argument("--mode", choices=("weighted", "talent", "league"), default="weighted")
    s.add_argument("--y", type=float, default=10.0)
    s.add_argument("--y-b", type=float, dest="y_b")
    s.add_argument("--y-c", type=float, dest="y_c")
    s.set_defaults(func=cmd_rank)

    for name, func, hlp in (("reputation", cmd_reputation, "reputations from a rating log"),
                            ("anomalies", cmd_anomalies, "flag unusual raters")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--ratings", required=True)
        s.set_defaults(func=func)

    s = sub.add_parser("aggregate", parents=[common], help="reputation-weighted rating summary of one item")
    s.add_argument("item")
    s.add_argument("--ratings", required=True)
    s.set_defaults(func=cmd_aggregate)

    s = sub.add_parser("review", parents=[common], help="replay manuscript workflow events")
    s.add_argument("event_log")
    s.add_argument("--allow-rereview", action="store_true")
    s.set_defaults(func=cmd_review)

    s = sub.add_parser("recommend", parents=[common], help="similar papers")
    s.add_argument("paper")
    s.add_argument("--by", choices=("tags", "coaccess"), default="tags")
    s.add_argument("--k", type=int, default=10)
    s.set_defaults(func=cmd_recommend)

    s = sub.add_parser("display-order", parents=[common], help="randomized popularity ordering of all papers")
    s.add_argument("--temperature", type=float, default=1.0)
    s.set_defaults(func=cmd_display_order)

    s = sub.add_parser("alerts", parents=[common], help="match subscriptions against papers")
    s.add_argument("--subscriptions", required=True)
    s.add_argument("--since", type=int, help="only papers from this year on")
    s.set_defaults(func=cmd_alerts)
    return p


def run(argv=None, stdout=None, stderr=None, environ=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args, environ)
        result = args.func(cfg, args)
    except UsageError as exc:
        stderr.write(parser.format_usage())
        stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (DataError, ScimetricsError, OSError, ValueError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_DATA
    stdout.write(render(result, cfg.format))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
