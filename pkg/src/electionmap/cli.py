"""Command-line pipeline: sample, measure, embed and draw maps of elections.

Stages communicate through files only::

    electionmap generate --config testbed.ini --out data/
    electionmap distmatrix --dataset data/ --metric emd-positionwise --out dist.csv
    electionmap embed --distances dist.csv --embedding kk --seed 7 --out coords.csv
    electionmap render --coordinates coords.csv --dataset data/ --out map.svg

``electionmap run --config testbed.ini --out results/`` chains all four.
Exit codes: 0 on success, 2 for invalid configuration or input, 3 when an
exact computation exceeds its budget.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import io as eio
from .approval import (
    approvalwise_distance,
    av_committee,
    cohesiveness_level,
    isomorphic_hamming_distance,
    max_approval_score,
    pav_committee,
    voters_in_1cohesive,
)
from .core import ApprovalElection, DistanceMatrix, OrdinalElection
from .distances.matrix import ElectionMetric, canonical_metric, id_un_distance
from .embedding import distortion, embed, monotonicity
from .errors import BudgetExceededError, ConfigError, ElectionMapError
from .rules import (
    APPROXIMATIONS,
    DODGSON_STATE_BUDGET,
    borda_scores,
    borda_spread,
    committee_score,
    condorcet_winner,
    copeland_scores,
    dodgson_winner,
    exact_committee,
    plurality_scores,
)
from .subelections import culture_similarity_matrix, max_common_voter_subelection

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3

APPROVAL_METRICS = ("approvalwise", "hamming")


def _read_config(path: str | None) -> eio.ExperimentConfig | None:
    if path is None:
        return None
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read configuration: {exc}") from None
    return eio.parse_config(text)


def _setting(args: argparse.Namespace, config, name: str, default):
    """Command-line flag, then configuration file, then built-in default."""
    value = getattr(args, name, None)
    if value is not None:
        return value
    if config is not None:
        return getattr(config, name)
    return default


def _write(path: str | Path, text: str) -> None:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as handle:
        handle.write(text)


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------


def stage_generate(config: eio.ExperimentConfig, out: Path) -> list[eio.StoredElection]:
    items = eio.generate_from_config(config)
    eio.write_dataset(out, items)
    return items


def election_metric(name: str, kind: str, budget: int | None) -> Callable[[object, object], float]:
    """Distance function for a dataset kind; ``budget`` caps branch-and-bound nodes."""
    key = name.strip().lower()
    if kind == "approval":
        if key == "approvalwise":
            return approvalwise_distance
        if key in ("hamming", "isomorphic-hamming"):
            return lambda a, b: isomorphic_hamming_distance(a, b, node_budget=budget)
        raise ConfigError(f"unknown approval metric {name!r}; expected one of {APPROVAL_METRICS}")
    try:
        return ElectionMetric(key, node_budget=budget)
    except ElectionMapError as exc:
        raise ConfigError(str(exc)) from None


def _dataset_kind(items: Sequence[eio.StoredElection]) -> str:
    kinds = {isinstance(item.election, ApprovalElection) for item in items}
    if len(kinds) != 1:
        raise ConfigError("a dataset must be entirely ordinal or entirely approval")
    return "approval" if kinds.pop() else "ordinal"


def stage_distmatrix(
    items: Sequence[eio.StoredElection],
    metric: str,
    budget: int | None = None,
    timing: bool = False,
    normalize: bool = False,
) -> tuple[DistanceMatrix, np.ndarray | None]:
    """Pairwise distances (and per-pair seconds when ``timing``)."""
    kind = _dataset_kind(items)
    fn = election_metric(metric, kind, budget)
    k = len(items)
    values = np.zeros((k, k))
    seconds = np.zeros((k, k)) if timing else None
    for i in range(k):
        for j in range(i + 1, k):
            start = time.perf_counter()
            values[i, j] = values[j, i] = float(fn(items[i].election, items[j].election))
            if seconds is not None:
                seconds[i, j] = seconds[j, i] = time.perf_counter() - start
    if normalize:
        if kind != "ordinal":
            raise ConfigError("normalization is defined for ordinal metrics only")
        shapes = {item.election.shape for item in items}
        if len(shapes) != 1:
            raise ConfigError("normalization needs every election to have the same size")
        m, n = shapes.pop()
        values = values / id_un_distance(canonical_metric(metric), m, n)
    return DistanceMatrix(tuple(item.label for item in items), values), seconds


def stage_embed(matrix: DistanceMatrix, algorithm: str, seed: int):
    try:
        return embed(matrix, algorithm, rng=seed)
    except ElectionMapError as exc:
        raise ConfigError(str(exc)) from None


def embedding_quality_csv(matrix: DistanceMatrix, embedding) -> str:
    mono, _ = monotonicity(matrix, embedding)
    dist, _ = distortion(matrix, embedding)
    rows = [[label, float(a), float(b)] for label, a, b in zip(matrix.labels, mono, dist)]
    return eio.format_table_csv(["label", "monotonicity", "tmr"], rows)


def stage_render(labels, points, colors=None, feature=None, colormap="viridis") -> str:
    from .embedding import Embedding

    emb = Embedding(tuple(labels), points, "file")
    style = eio.MapStyle(colors=colors or {}, feature=feature, colormap=colormap)
    return eio.render_svg_map(emb, style)


RULES_HEADER = ("election_label", "rule", "score", "runtime_seconds")


def _timed(fn, timing: bool):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) if timing else 0


def rules_rows(items: Sequence[eio.StoredElection], k: int, budget: int | None, dodgson: bool, timing: bool = False):
    """Long-format rule evaluations, one row per election and rule.

    Single-winner rules report the winning score (Dodgson: the smallest
    number of swaps), committee rules the committee score, and
    ``condorcet`` is 1 when a Condorcet winner exists.  Runtimes are 0 unless
    ``timing`` is set, which keeps the file reproducible by default.
    """
    rows = []
    extra = {} if budget is None else {"budget": budget}
    for item in items:
        e = item.election
        if not isinstance(e, OrdinalElection):
            raise ConfigError("voting rules need an ordinal dataset")
        evaluations = [
            ("plurality", lambda: plurality_scores(e).best_score),
            ("borda", lambda: borda_scores(e).best_score),
            ("copeland", lambda: copeland_scores(e).best_score),
            ("condorcet", lambda: int(condorcet_winner(e) is not None)),
            ("borda-spread", lambda: borda_spread(e)),
            ("cc", lambda: exact_committee(e, k, "cc", **extra)[1]),
            ("hb", lambda: exact_committee(e, k, "hb", **extra)[1]),
        ]
        for name, (fn, rule) in APPROXIMATIONS.items():
            evaluations.append((name, lambda fn=fn, rule=rule: committee_score(e, fn(e, k), rule)))
        if dodgson:
            state_budget = budget or DODGSON_STATE_BUDGET
            evaluations.append(("dodgson", lambda: dodgson_winner(e, state_budget=state_budget).best_score))
        for name, fn in evaluations:
            value, seconds = _timed(fn, timing)
            rows.append([item.label, name, float(value), seconds])
    return list(RULES_HEADER), rows


def subelection_rows(items: Sequence[eio.StoredElection]):
    rows = []
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            a, b = items[i].election, items[j].election
            if not isinstance(a, OrdinalElection) or not isinstance(b, OrdinalElection):
                raise ConfigError("subelections need an ordinal dataset")
            size = max_common_voter_subelection(a, b).size
            rows.append([items[i].label, items[j].label, size, size / min(a.num_voters, b.num_voters)])
    return ["label_a", "label_b", "common_voters", "fraction"], rows


def approval_rows(items: Sequence[eio.StoredElection], k: int, budget: int | None):
    header = [
        "label",
        "mean_ballot_size",
        "max_approval_score",
        "av_score",
        "pav_score",
        "cohesiveness_level",
        "voters_in_1cohesive",
    ]
    rows = []
    extra = {} if budget is None else {"budget": budget}
    for item in items:
        e = item.election
        if not isinstance(e, ApprovalElection):
            raise ConfigError("approval statistics need an approval dataset")
        rows.append(
            [
                item.label,
                float(e.matrix.sum(axis=1).mean()),
                float(max_approval_score(e)),
                float(av_committee(e, k)[1]),
                float(pav_committee(e, k, **extra)[1]),
                cohesiveness_level(e, k, **extra),
                float(voters_in_1cohesive(e, k)),
            ]
        )
    return header, rows


# ---------------------------------------------------------------------------
# Command handlers
# ---------------------------------------------------------------------------


def _cmd_generate(args) -> None:
    config = _read_config(args.config)
    if config is None:
        raise ConfigError("generate needs --config")
    if args.seed is not None:
        config = eio.ExperimentConfig(**{**config.__dict__, "seed": args.seed})
    stage_generate(config, Path(args.out))


def _cmd_distmatrix(args) -> None:
    config = _read_config(args.config)
    items = eio.read_dataset(args.dataset)
    metric = _setting(args, config, "metric", "emd-positionwise")
    budget = _setting(args, config, "budget", None)
    normalize = args.normalize or (config is not None and config.normalize)
    matrix, seconds = stage_distmatrix(items, metric, budget, args.timing is not None, normalize)
    _write(args.out, eio.format_distance_csv(matrix))
    if seconds is not None:
        _write(args.timing, eio.format_timing_csv(matrix.labels, seconds))


def _cmd_embed(args) -> None:
    config = _read_config(args.config)
    matrix = eio.parse_distance_csv(_read(args.distances))
    algorithm = _setting(args, config, "embedding", "kk")
    emb = stage_embed(matrix, algorithm, _setting(args, config, "seed", 0))
    _write(args.out, eio.format_coordinates_csv(emb))
    if args.quality:
        _write(args.quality, embedding_quality_csv(matrix, emb))


def _cmd_render(args) -> None:
    labels, points = eio.parse_coordinates_csv(_read(args.coordinates))
    colors = {}
    if args.dataset:
        colors = {item.label: item.color for item in eio.read_dataset(args.dataset)}
    feature = None
    if args.features:
        if not args.column:
            raise ConfigError("--features needs --column")
        feature = eio.parse_feature_column(_read(args.features), args.column)
    _write(args.out, stage_render(labels, points, colors, feature, args.colormap))


def _cmd_rules(args) -> None:
    items = eio.read_dataset(args.dataset)
    header, rows = rules_rows(items, args.committee_size, args.budget, args.dodgson, args.timing)
    _write(args.out, eio.format_table_csv(header, rows))


def _cmd_subelections(args) -> None:
    if (args.dataset is None) == (args.cultures is None):
        raise ConfigError("subelections needs exactly one of --dataset and --cultures")
    if args.dataset is not None:
        header, rows = subelection_rows(eio.read_dataset(args.dataset))
        _write(args.out, eio.format_table_csv(header, rows))
        return
    specs = [s.strip() for s in args.cultures.split(";") if s.strip()]
    mean, std = culture_similarity_matrix(specs, args.m, args.n, args.trials, args.seed)
    _write(args.out, eio.format_similarity_csv(specs, mean, std))


def _cmd_approval_stats(args) -> None:
    header, rows = approval_rows(eio.read_dataset(args.dataset), args.committee_size, args.budget)
    _write(args.out, eio.format_table_csv(header, rows))


def _cmd_preflib(args) -> None:
    records, names = eio.parse_preflib_soc(Path(args.input).read_bytes())
    gen = np.random.default_rng(args.seed)
    election = eio.complete_votes(records, len(names), gen)
    kept = list(range(len(names)))
    if args.top is not None:
        election, kept = eio.restrict_top_candidates(election, args.top, gen)
    if args.voters is not None:
        election = eio.sample_voters(election, args.voters, gen)
    _write(args.out, eio.format_election(election))
    if args.names:
        _write(args.names, eio.format_names([names[c] for c in kept]))


def _cmd_run(args) -> None:
    config = _read_config(args.config)
    if config is None:
        raise ConfigError("run needs --config")
    if args.seed is not None:
        config = eio.ExperimentConfig(**{**config.__dict__, "seed": args.seed})
    out = Path(args.out)
    outputs = {
        "dataset": "dataset",
        "distances": "distances.csv",
        "timing": "timing.csv",
        "coordinates": "coordinates.csv",
        "map": "map.svg",
    }
    outputs.update(config.outputs)
    metric = args.metric or config.metric
    budget = args.budget if args.budget is not None else config.budget
    items = stage_generate(config, out / outputs["dataset"])
    matrix, seconds = stage_distmatrix(items, metric, budget, args.timing, config.normalize)
    _write(out / outputs["distances"], eio.format_distance_csv(matrix))
    if seconds is not None:
        _write(out / outputs["timing"], eio.format_timing_csv(matrix.labels, seconds))
    emb = stage_embed(matrix, args.embedding or config.embedding, config.seed)
    _write(out / outputs["coordinates"], eio.format_coordinates_csv(emb))
    colors = {item.label: item.color for item in items}
    _write(out / outputs["map"], stage_render(emb.labels, emb.points, colors))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="electionmap", description="Maps of elections.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = add("generate", _cmd_generate, "sample the elections of a configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="dataset directory")

    p = add("distmatrix", _cmd_distmatrix, "pairwise distances of a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--config")
    p.add_argument("--metric")
    p.add_argument("--budget", type=int, help="node cap for exact searches")
    p.add_argument("--normalize", action="store_true", help="divide by the identity-uniformity distance")
    p.add_argument("--timing", metavar="PATH", help="also write per-pair computing times here")
    p.add_argument("--out", required=True)

    p = add("embed", _cmd_embed, "embed a distance file in the plane")
    p.add_argument("--distances", required=True)
    p.add_argument("--config")
    p.add_argument("--embedding", choices=("kk", "fr", "mds"))
    p.add_argument("--seed", type=int)
    p.add_argument("--quality", help="optional per-item monotonicity/distortion (tmr) CSV")
    p.add_argument("--out", required=True)

    p = add("render", _cmd_render, "draw coordinates as an SVG map")
    p.add_argument("--coordinates", required=True)
    p.add_argument("--dataset", help="take point colors from this dataset index")
    p.add_argument("--features", help="feature CSV with a 'label' column")
    p.add_argument("--column", help="feature column used for shading")
    p.add_argument("--colormap", default="viridis", choices=sorted(eio.COLORMAPS))
    p.add_argument("--out", required=True)

    p = add("rules", _cmd_rules, "winners and committee scores of every election")
    p.add_argument("--dataset", required=True)
    p.add_argument("--committee-size", type=int, default=2)
    p.add_argument("--budget", type=int, help="committee enumeration cap")
    p.add_argument("--dodgson", action="store_true", help="also compute Dodgson scores")
    p.add_argument("--timing", action="store_true", help="record runtimes (otherwise 0)")
    p.add_argument("--out", required=True)

    p = add("subelections", _cmd_subelections, "largest common voter subelections")
    p.add_argument("--dataset", help="compare every pair of elections of this dataset")
    p.add_argument("--cultures", help="';'-separated culture specs to compare by sampling")
    p.add_argument("-m", type=int, default=10, help="candidates per sampled election")
    p.add_argument("-n", type=int, default=50, help="voters per sampled election")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = add("approval-stats", _cmd_approval_stats, "statistics of approval elections")
    p.add_argument("--dataset", required=True)
    p.add_argument("--committee-size", type=int, default=2)
    p.add_argument("--budget", type=int, help="subset enumeration cap")
    p.add_argument("--out", required=True)

    p = add("preflib", _cmd_preflib, "complete, restrict and resample a PrefLib file")
    p.add_argument("--input", required=True)
    p.add_argument("--top", type=int, help="keep this many highest-Borda candidates")
    p.add_argument("--voters", type=int, help="resample this many votes with replacement")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--names", help="write kept candidate names here")
    p.add_argument("--out", required=True)

    p = add("run", _cmd_run, "generate, measure, embed and render in one go")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--metric")
    p.add_argument("--embedding", choices=("kk", "fr", "mds"))
    p.add_argument("--budget", type=int)
    p.add_argument("--timing", action="store_true", help="also write timing.csv")
    p.add_argument("--out", required=True)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.handler(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ElectionMapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
