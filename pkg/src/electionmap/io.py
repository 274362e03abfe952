"""Text formats, real-life data preprocessing, experiment configs and map rendering.

Every format here is plain text.  Candidates are 0-based integers in the
election and approval formats; PrefLib files number them from 1 and carry
names, which are kept in a separate label file so the rest of the library can
stay index-based.  Floats written to CSV use :data:`FLOAT_FORMAT` so that
reruns are byte-identical.
"""

from __future__ import annotations

import configparser
import csv
import io as _io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .approval import ApprovalCultureSpec
from .core import ApprovalElection, DistanceMatrix, OrdinalElection, borda_vector
from .cultures import RngLike, as_generator
from .datasets import DatasetEntry
from .embedding import Embedding
from .errors import ConfigError, DomainError, ElectionMapError, ParseError

#: Nine significant digits: enough to separate any two distances that matter
#: on a map while keeping files stable across platforms.
FLOAT_FORMAT = ".9g"


def format_float(value: float) -> str:
    """Fixed-precision float text used by every CSV writer."""
    value = float(value)
    if value == 0.0:
        return "0"  # also folds -0.0
    return format(value, FLOAT_FORMAT)


# ---------------------------------------------------------------------------
# Election text format
# ---------------------------------------------------------------------------

_COUNT_PREFIX = re.compile(r"^\s*(\d+)\s*\*\s*(.*)$")


def _runs(rows: Sequence[tuple]) -> list[tuple[int, tuple]]:
    """Collapse consecutive equal rows into ``(count, row)`` runs."""
    runs: list[tuple[int, tuple]] = []
    for row in rows:
        if runs and runs[-1][1] == row:
            runs[-1] = (runs[-1][0] + 1, row)
        else:
            runs.append((1, row))
    return runs


def _split_count(line: str, lineno: int) -> tuple[int, str]:
    match = _COUNT_PREFIX.match(line)
    if match is None:
        return 1, line.strip()
    count = int(match.group(1))
    if count < 1:
        raise ParseError("multiplicity must be at least 1", lineno)
    return count, match.group(2).strip()


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def format_election(election: OrdinalElection) -> str:
    """One ranking per line, ``>``-separated; runs of equal votes get a ``count *`` prefix."""
    lines = []
    for count, row in _runs(election.vote_list()):
        ranking = " > ".join(str(c) for c in row)
        lines.append(ranking if count == 1 else f"{count} * {ranking}")
    return "\n".join(lines) + "\n"


def parse_election(text: str) -> OrdinalElection:
    """Inverse of :func:`format_election`. Lines starting with ``#`` are comments.

    Raises:
        ParseError: with the 1-based line number of the first malformed line.
    """
    votes: list[list[int]] = []
    m: int | None = None
    for lineno, line in _content_lines(text):
        count, body = _split_count(line, lineno)
        try:
            ranking = [int(token) for token in body.split(">")]
        except ValueError:
            raise ParseError(f"expected integers separated by '>', got {body!r}", lineno) from None
        if m is None:
            m = len(ranking)
        if len(ranking) != m or sorted(ranking) != list(range(m)):
            raise ParseError(f"not a complete ranking of candidates 0..{m - 1}", lineno)
        votes.extend([ranking] * count)
    if not votes:
        raise ParseError("no votes found")
    return OrdinalElection.from_votes(votes, m)


# ---------------------------------------------------------------------------
# Approval text format
# ---------------------------------------------------------------------------

_CANDIDATES_HEADER = re.compile(r"^#\s*candidates\s*:\s*(\d+)\s*$", re.IGNORECASE)
#: Written in place of an empty ballot so that blank lines can stay insignificant.
EMPTY_BALLOT = "-"


def format_approval(election: ApprovalElection) -> str:
    """Header ``# candidates: m`` then one comma-separated ballot per line."""
    rows = [tuple(int(c) for c in np.flatnonzero(row)) for row in election.matrix]
    lines = [f"# candidates: {election.num_candidates}"]
    for count, row in _runs(rows):
        ballot = ",".join(str(c) for c in row) if row else EMPTY_BALLOT
        lines.append(ballot if count == 1 else f"{count} * {ballot}")
    return "\n".join(lines) + "\n"


def parse_approval(text: str) -> ApprovalElection:
    """Inverse of :func:`format_approval`; the candidate header is mandatory."""
    m: int | None = None
    rows: list[np.ndarray] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        header = _CANDIDATES_HEADER.match(line)
        if header is not None:
            m = int(header.group(1))
            continue
        if not line or line.startswith("#"):
            continue
        if m is None:
            raise ParseError("ballot before the '# candidates: m' header", lineno)
        count, body = _split_count(line, lineno)
        row = np.zeros(m, dtype=bool)
        if body != EMPTY_BALLOT:
            try:
                members = [int(token) for token in body.split(",")]
            except ValueError:
                raise ParseError(f"expected comma-separated integers, got {body!r}", lineno) from None
            if len(set(members)) != len(members) or any(not 0 <= c < m for c in members):
                raise ParseError(f"approvals must be distinct candidates in 0..{m - 1}", lineno)
            row[members] = True
        rows.extend([row] * count)
    if m is None:
        raise ParseError("missing '# candidates: m' header")
    if not rows:
        raise ParseError("no ballots found")
    return ApprovalElection.from_matrix(np.array(rows))


# ---------------------------------------------------------------------------
# PrefLib ordinal files
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RawPrefRecord:
    """A possibly incomplete ranking with ties, repeated ``count`` times.

    Attributes:
        groups: tie groups, best first; each group is a tuple of 0-based
            candidates reported as equally good.
        count: multiplicity.
    """

    groups: tuple[tuple[int, ...], ...]
    count: int = 1

    def __post_init__(self):
        groups = tuple(tuple(int(c) for c in g) for g in self.groups)
        if self.count < 1:
            raise DomainError("record multiplicity must be at least 1")
        if any(not g for g in groups):
            raise DomainError("tie groups must be nonempty")
        flat = [c for g in groups for c in g]
        if len(set(flat)) != len(flat):
            raise DomainError("a ranking lists every candidate at most once")
        object.__setattr__(self, "groups", groups)

    @property
    def candidates(self) -> tuple[int, ...]:
        return tuple(c for g in self.groups for c in g)

    @property
    def has_ties(self) -> bool:
        return any(len(g) > 1 for g in self.groups)


def _parse_ranking(body: str, m: int, lineno: int) -> tuple[tuple[int, ...], ...]:
    groups: list[tuple[int, ...]] = []
    for token in re.findall(r"\{[^}]*\}|[^,{}]+", body):
        token = token.strip()
        if not token:
            continue
        inner = token[1:-1] if token.startswith("{") else token
        try:
            group = tuple(int(x) - 1 for x in inner.split(",") if x.strip())
        except ValueError:
            raise ParseError(f"bad candidate token {token!r}", lineno) from None
        if not group:
            continue
        if any(not 0 <= c < m for c in group):
            raise ParseError(f"candidate outside 1..{m}", lineno)
        groups.append(group)
    if re.sub(r"\{[^}]*\}|[^,{}]+|,|\s", "", body):
        raise ParseError("unbalanced braces", lineno)
    return tuple(groups)


def parse_preflib_soc(data: bytes | str) -> tuple[list[RawPrefRecord], list[str]]:
    """Read a PrefLib ``soc``/``soi``/``toc``/``toi`` ordinal file.

    Both header styles are understood: the modern one with ``# NUMBER
    ALTERNATIVES`` and ``# ALTERNATIVE NAME i`` comment lines, and the classic
    one with the candidate count, ``i,name`` lines and a ``voters,total,unique``
    line.  Data lines are ``count: c1,c2,{c3,c4},...`` (modern) or
    ``count,c1,c2,...`` (classic), candidates numbered from 1.

    Returns:
        The records and the candidate names (``str(i + 1)`` when unnamed).

    Raises:
        ParseError: on any malformed line, carrying its line number.
    """
    text = data.decode("utf-8") if isinstance(data, (bytes, bytearray)) else data
    lines = text.splitlines()
    m: int | None = None
    names: dict[int, str] = {}
    records: list[RawPrefRecord] = []
    classic_header = 0  # classic lines still expected before the data section
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            key = key.strip().upper()
            if key == "NUMBER ALTERNATIVES":
                try:
                    m = int(value)
                except ValueError:
                    raise ParseError("bad NUMBER ALTERNATIVES", lineno) from None
            elif key.startswith("ALTERNATIVE NAME"):
                try:
                    names[int(key.split()[-1]) - 1] = value.strip()
                except ValueError:
                    raise ParseError("bad ALTERNATIVE NAME line", lineno) from None
            continue
        if m is None:
            try:
                m = int(line)
            except ValueError:
                raise ParseError("expected the number of candidates", lineno) from None
            classic_header = m + 1
            continue
        if classic_header > 0:
            classic_header -= 1
            if classic_header > 0:
                index, _, name = line.partition(",")
                try:
                    names[int(index) - 1] = name.strip()
                except ValueError:
                    raise ParseError("expected 'index,name'", lineno) from None
            continue
        head, sep, body = line.partition(":")
        if not sep:
            head, _, body = line.partition(",")
        try:
            count = int(head)
        except ValueError:
            raise ParseError(f"expected a multiplicity, got {head!r}", lineno) from None
        if count < 1:
            raise ParseError("multiplicity must be at least 1", lineno)
        groups = _parse_ranking(body, m, lineno)
        try:
            records.append(RawPrefRecord(groups, count))
        except DomainError as exc:
            raise ParseError(str(exc), lineno) from None
    if m is None:
        raise ParseError("missing header")
    if not records:
        raise ParseError("no preference lines found")
    return records, [names.get(c, str(c + 1)) for c in range(m)]


def format_preflib(records: Sequence[RawPrefRecord], names: Sequence[str]) -> str:
    """Write records in the modern PrefLib layout (readable by :func:`parse_preflib_soc`)."""
    m = len(names)
    complete = all(len(r.candidates) == m for r in records)
    ties = any(r.has_ties for r in records)
    kind = ("toc" if complete else "toi") if ties else ("soc" if complete else "soi")
    total = sum(r.count for r in records)
    lines = [
        f"# DATA TYPE: {kind}",
        f"# NUMBER ALTERNATIVES: {m}",
        *(f"# ALTERNATIVE NAME {i + 1}: {name}" for i, name in enumerate(names)),
        f"# NUMBER VOTERS: {total}",
        f"# NUMBER UNIQUE ORDERS: {len(records)}",
    ]
    for record in records:
        parts = [
            str(g[0] + 1) if len(g) == 1 else "{" + ",".join(str(c + 1) for c in g) + "}" for g in record.groups
        ]
        lines.append(f"{record.count}: {','.join(parts)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Preprocessing of real-life elections
# ---------------------------------------------------------------------------


def break_ties(record: RawPrefRecord, gen: np.random.Generator) -> list[int]:
    """Order each tie group uniformly at random; returns the strict (possibly partial) ranking."""
    ranking: list[int] = []
    for group in record.groups:
        ranking.extend(int(c) for c in gen.permutation(np.asarray(group)))
    return ranking


def complete_votes(records: Sequence[RawPrefRecord], num_candidates: int, rng: RngLike = None) -> OrdinalElection:
    """Turn raw records into an election with complete strict votes.

    Each record is expanded by its multiplicity and ties are broken uniformly
    at random, independently per vote.  An incomplete vote is then extended
    one candidate at a time: among the tie-broken votes that strictly extend
    it as a prefix, one is drawn uniformly and its next candidate appended;
    when there is no such vote, a uniformly random unranked candidate is
    appended instead.

    Args:
        records: at least one record.
        num_candidates: number of candidates ``m`` of the election.
        rng: seed or generator.
    """
    if not records:
        raise DomainError("at least one record is required")
    m = int(num_candidates)
    gen = as_generator(rng)
    originals = [break_ties(record, gen) for record in records for _ in range(record.count)]
    if any(c >= m for vote in originals for c in vote):
        raise DomainError("record mentions a candidate outside 0..m-1")
    references = [tuple(v) for v in originals]
    votes: list[list[int]] = []
    for vote in originals:
        vote = list(vote)
        while len(vote) < m:
            prefix = tuple(vote)
            k = len(prefix)
            pool = [ref[k] for ref in references if len(ref) > k and ref[:k] == prefix]
            if pool:
                vote.append(pool[int(gen.integers(len(pool)))])
            else:
                rest = sorted(set(range(m)) - set(vote))
                vote.append(rest[int(gen.integers(len(rest)))])
        votes.append(vote)
    return OrdinalElection.from_votes(votes, m)


def restrict_top_candidates(election: OrdinalElection, t: int, rng: RngLike = None) -> tuple[OrdinalElection, list[int]]:
    """Keep the ``t`` candidates with the highest Borda scores.

    Ties are broken by a seeded random shuffle of the candidates followed by a
    stable sort on the scores.  Kept candidates are renumbered in their
    original index order.

    Returns:
        The restricted election and the original indices of the kept candidates.
    """
    m = election.num_candidates
    if not 1 <= t <= m:
        raise DomainError(f"t must lie in 1..{m}")
    gen = as_generator(rng)
    shuffled = gen.permutation(m)
    scores = borda_vector(election)[shuffled]
    order = shuffled[np.argsort(-scores, kind="stable")]
    kept = sorted(int(c) for c in order[:t])
    return election.restrict(kept), kept


def sample_voters(election: OrdinalElection, n_out: int, rng: RngLike = None) -> OrdinalElection:
    """Draw ``n_out`` votes uniformly at random with replacement."""
    if n_out < 1:
        raise DomainError("n_out must be positive")
    gen = as_generator(rng)
    idx = gen.integers(election.num_voters, size=n_out)
    return OrdinalElection(election.num_candidates, election.votes[idx])


def format_names(names: Sequence[str]) -> str:
    """Candidate label file: one ``index,name`` CSV row per candidate."""
    return _csv_text(["index", "name"], [[i, name] for i, name in enumerate(names)])


def parse_names(text: str) -> list[str]:
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or rows[0] != ["index", "name"]:
        raise ParseError("expected header 'index,name'", 1)
    names: list[str] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2 or row[0] != str(len(names)):
            raise ParseError("expected consecutive 'index,name' rows", lineno)
        names.append(row[1])
    return names


# ---------------------------------------------------------------------------
# CSV tables
# ---------------------------------------------------------------------------


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = _io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(x) if isinstance(x, (float, np.floating)) else x for x in row])
    return buffer.getvalue()


def _csv_rows(text: str, header: Sequence[str]) -> list[list[str]]:
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0][: len(header)]] != list(header):
        raise ParseError(f"expected header starting with {','.join(header)}", 1)
    return rows


def format_distance_csv(matrix: DistanceMatrix) -> str:
    """A header row of labels followed by one row of distances per label."""
    k = len(matrix)
    return _csv_text(list(matrix.labels), [[float(matrix.values[i, j]) for j in range(k)] for i in range(k)])


def parse_distance_csv(text: str) -> DistanceMatrix:
    """Inverse of :func:`format_distance_csv`; checks shape, symmetry and the zero diagonal."""
    rows = [row for row in csv.reader(_io.StringIO(text)) if row]
    if not rows:
        raise ParseError("empty distance file", 1)
    labels = tuple(label.strip() for label in rows[0])
    if len(set(labels)) != len(labels) or any(not label for label in labels):
        raise ParseError("labels must be nonempty and unique", 1)
    k = len(labels)
    if len(rows) != k + 1:
        raise ParseError(f"expected {k} rows of distances, got {len(rows) - 1}")
    values = np.zeros((k, k))
    for i, row in enumerate(rows[1:]):
        lineno = i + 2
        if len(row) != k:
            raise ParseError(f"expected {k} distances", lineno)
        try:
            values[i] = [float(x) for x in row]
        except ValueError:
            raise ParseError("distances must be numbers", lineno) from None
        if values[i, i] != 0:
            raise ParseError("self-distance must be zero", lineno)
    asymmetric = np.argwhere(values != values.T)
    if len(asymmetric):
        raise ParseError("distance matrix is not symmetric", int(asymmetric[0].max()) + 2)
    return DistanceMatrix(labels, values)


def format_timing_csv(labels: Sequence[str], seconds: np.ndarray) -> str:
    """Per-pair computing times as ``label_a,label_b,seconds`` rows."""
    k = len(labels)
    rows = [[labels[i], labels[j], float(seconds[i, j])] for i in range(k) for j in range(i + 1, k)]
    return _csv_text(["label_a", "label_b", "seconds"], rows)


def format_similarity_csv(labels: Sequence[str], mean: np.ndarray, std: np.ndarray) -> str:
    """Culture similarity as ``label_a,label_b,mean,std`` rows over the upper triangle."""
    k = len(labels)
    rows = [[labels[a], labels[b], float(mean[a, b]), float(std[a, b])] for a in range(k) for b in range(a, k)]
    return _csv_text(["label_a", "label_b", "mean", "std"], rows)


def format_coordinates_csv(embedding: Embedding) -> str:
    rows = [[label, float(x), float(y)] for label, (x, y) in zip(embedding.labels, embedding.points)]
    return _csv_text(["label", "x", "y"], rows)


def parse_coordinates_csv(text: str) -> tuple[list[str], np.ndarray]:
    rows = _csv_rows(text, ["label", "x", "y"])
    labels, points = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            labels.append(row[0])
            points.append((float(row[1]), float(row[2])))
        except (IndexError, ValueError):
            raise ParseError("expected label,x,y", lineno) from None
    return labels, np.array(points, dtype=float).reshape(-1, 2)


def format_table_csv(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    """Generic feature table; floats use :data:`FLOAT_FORMAT`."""
    return _csv_text(header, rows)


def parse_feature_column(text: str, column: str) -> dict[str, float]:
    """Map ``label -> value`` for one numeric column of a feature table."""
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or "label" not in rows[0] or column not in rows[0]:
        raise ParseError(f"feature table needs 'label' and {column!r} columns", 1)
    li, ci = rows[0].index("label"), rows[0].index(column)
    values = {}
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            values[row[li]] = float(row[ci])
        except (IndexError, ValueError):
            raise ParseError(f"bad value in column {column!r}", lineno) from None
    return values


# ---------------------------------------------------------------------------
# Experiment configuration
# ---------------------------------------------------------------------------

EXPERIMENT_SECTION = "experiment"
DATASET_KINDS = ("ordinal", "approval")


@dataclass(frozen=True)
class ConfigEntry:
    """One dataset row: ``count`` elections of one culture.

    ``seed`` overrides the dataset-wide seeding for this entry only.
    """

    label: str
    culture: str
    count: int
    m: int
    n: int
    seed: int | None = None
    color: str = "black"


@dataclass(frozen=True)
class ExperimentConfig:
    """A dataset plus the metric, embedding and budget used to map it.

    Attributes:
        entries: dataset rows with unique labels.
        kind: ``"ordinal"`` or ``"approval"``.
        seed: base seed; election ``i`` is drawn with ``seed ^ i``.
        metric: distance name (see :mod:`electionmap.distances`, or
            ``approvalwise``/``hamming`` for approval data).
        embedding: ``kk``, ``fr`` or ``mds``.
        budget: optional branch-and-bound node cap for exact distances.
        normalize: divide distances by the identity-uniformity distance.
    """

    entries: tuple[ConfigEntry, ...]
    kind: str = "ordinal"
    seed: int = 0
    metric: str = "emd-positionwise"
    embedding: str = "kk"
    budget: int | None = None
    normalize: bool = False
    outputs: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if not self.entries:
            raise ConfigError("configuration has no dataset entries")
        if self.kind not in DATASET_KINDS:
            raise ConfigError(f"kind must be one of {DATASET_KINDS}")
        labels = [e.label for e in self.entries]
        if len(set(labels)) != len(labels):
            raise ConfigError("dataset labels must be unique")
        for entry in self.entries:
            if entry.count < 1:
                raise ConfigError(f"entry {entry.label!r}: count must be at least 1")
            if entry.m < 1 or entry.n < 1:
                raise ConfigError(f"entry {entry.label!r}: m and n must be positive")
            try:
                if self.kind == "ordinal":
                    DatasetEntry(entry.culture, entry.count, entry.m, entry.n, entry.label, entry.color)
                else:
                    ApprovalCultureSpec.parse(entry.culture)
            except ConfigError:
                raise
            except ElectionMapError as exc:
                raise ConfigError(f"entry {entry.label!r}: {exc}") from None


def _get_int(section: configparser.SectionProxy, key: str, default: int | None = None) -> int | None:
    raw = section.get(key)
    if raw is None:
        if default is None and key in ("count", "m", "n"):
            raise ConfigError(f"section [{section.name}] is missing {key!r}")
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"[{section.name}] {key} must be an integer, got {raw!r}") from None


def parse_config(text: str) -> ExperimentConfig:
    """Read an INI experiment description.

    The ``[experiment]`` section holds ``kind``, ``seed``, ``metric``,
    ``embedding``, ``budget`` and ``normalize``; ``[outputs]`` may name files.
    Every other section is a dataset entry whose name is its label, with keys
    ``culture``, ``count``, ``m``, ``n`` and optional ``seed`` and ``color``.
    Section order fixes election order.
    """
    parser = configparser.ConfigParser(interpolation=None, default_section="__defaults__")
    parser.optionxform = str.lower
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable configuration: {exc}") from None
    options: dict[str, object] = {}
    if parser.has_section(EXPERIMENT_SECTION):
        exp = parser[EXPERIMENT_SECTION]
        unknown = set(exp) - {"kind", "seed", "metric", "embedding", "budget", "normalize"}
        if unknown:
            raise ConfigError(f"unknown [experiment] keys: {sorted(unknown)}")
        options["kind"] = exp.get("kind", "ordinal").strip().lower()
        options["seed"] = _get_int(exp, "seed", 0)
        options["metric"] = exp.get("metric", "emd-positionwise").strip()
        options["embedding"] = exp.get("embedding", "kk").strip().lower()
        options["budget"] = _get_int(exp, "budget", None)
        try:
            options["normalize"] = exp.getboolean("normalize", False)
        except ValueError:
            raise ConfigError("[experiment] normalize must be a boolean") from None
    outputs = dict(parser["outputs"]) if parser.has_section("outputs") else {}
    entries = []
    for name in parser.sections():
        if name in (EXPERIMENT_SECTION, "outputs"):
            continue
        section = parser[name]
        unknown = set(section) - {"culture", "count", "m", "n", "seed", "color"}
        if unknown:
            raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
        if "culture" not in section:
            raise ConfigError(f"section [{name}] is missing 'culture'")
        entries.append(
            ConfigEntry(
                label=name,
                culture=section["culture"].strip(),
                count=_get_int(section, "count"),
                m=_get_int(section, "m"),
                n=_get_int(section, "n"),
                seed=_get_int(section, "seed", None),
                color=section.get("color", "black").strip(),
            )
        )
    return ExperimentConfig(tuple(entries), outputs=outputs, **options)


def format_config(config: ExperimentConfig) -> str:
    """Serialize a configuration so that :func:`parse_config` reads it back unchanged."""
    lines = [
        f"[{EXPERIMENT_SECTION}]",
        f"kind = {config.kind}",
        f"seed = {config.seed}",
        f"metric = {config.metric}",
        f"embedding = {config.embedding}",
    ]
    if config.budget is not None:
        lines.append(f"budget = {config.budget}")
    lines.append(f"normalize = {'yes' if config.normalize else 'no'}")
    if config.outputs:
        lines += ["", "[outputs]", *(f"{k} = {v}" for k, v in config.outputs.items())]
    for e in config.entries:
        lines += ["", f"[{e.label}]", f"culture = {e.culture}", f"count = {e.count}", f"m = {e.m}", f"n = {e.n}"]
        if e.seed is not None:
            lines.append(f"seed = {e.seed}")
        lines.append(f"color = {e.color}")
    return "\n".join(lines) + "\n"


def testbed_config(m: int = 10, n: int = 50, seed: int = 0, metric: str = "emd-positionwise") -> ExperimentConfig:
    """The 340 + 4 election testbed as an :class:`ExperimentConfig`."""
    from .datasets import testbed_entries

    entries = tuple(ConfigEntry(e.label, e.culture, e.count, e.m, e.n, None, e.color) for e in testbed_entries(m, n))
    return ExperimentConfig(entries, seed=seed, metric=metric)


# ---------------------------------------------------------------------------
# SVG maps
# ---------------------------------------------------------------------------

#: Anchor colors of the sequential colormap used for feature shading
#: (a five-stop approximation of the usual perceptually uniform blue-green-yellow ramp).
COLORMAPS: dict[str, tuple[tuple[int, int, int], ...]] = {
    "viridis": ((68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37)),
    "gray": ((0, 0, 0), (255, 255, 255)),
}

COMPASS_LABELS = ("ID", "UN", "AN", "ST")


def colormap_color(value: float, name: str = "viridis") -> str:
    """Hex color for ``value`` in ``[0, 1]`` by piecewise-linear interpolation."""
    try:
        anchors = np.array(COLORMAPS[name], dtype=float)
    except KeyError:
        raise DomainError(f"unknown colormap {name!r}; expected one of {sorted(COLORMAPS)}") from None
    t = min(max(float(value), 0.0), 1.0) * (len(anchors) - 1)
    lo = min(int(t), len(anchors) - 2)
    rgb = anchors[lo] + (t - lo) * (anchors[lo + 1] - anchors[lo])
    return "#" + "".join(f"{int(round(c)):02x}" for c in rgb)


@dataclass(frozen=True)
class MapStyle:
    """Styling of a rendered map.

    Attributes:
        colors: fill color per label; unlisted labels use ``default_color``.
        feature: optional numeric value per label; when set, it overrides
            ``colors`` through ``colormap`` after min-max scaling.
        size: width and height of the square canvas in pixels.
        radius: circle radius in pixels.
        show_labels: label names to print next to their points; ``None``
            prints the compass labels that are present.
    """

    colors: Mapping[str, str] = field(default_factory=dict)
    default_color: str = "black"
    feature: Mapping[str, float] | None = None
    colormap: str = "viridis"
    size: int = 600
    radius: float = 4.0
    margin: float = 20.0
    show_labels: Sequence[str] | None = None


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg_map(embedding: Embedding, style: MapStyle | None = None) -> str:
    """An SVG 1.1 document with one ``circle`` per embedded item.

    Each circle carries ``data-label`` (and ``data-value`` when a feature is
    shown) so the picture can be inspected structurally.  The y axis points up.
    """
    style = style or MapStyle()
    points = np.asarray(embedding.points, dtype=float)
    size, margin = float(style.size), float(style.margin)
    if len(points):
        lo, hi = points.min(axis=0), points.max(axis=0)
        span = float(max(hi - lo)) or 1.0
        scale = (size - 2 * margin) / span
        center = (lo + hi) / 2
        screen = np.column_stack(
            [size / 2 + (points[:, 0] - center[0]) * scale, size / 2 - (points[:, 1] - center[1]) * scale]
        )
    else:
        screen = points.reshape(0, 2)
    fills = {label: style.colors.get(label, style.default_color) for label in embedding.labels}
    values: dict[str, float] = {}
    if style.feature is not None:
        values = {label: float(style.feature[label]) for label in embedding.labels if label in style.feature}
        if values:
            vmin, vmax = min(values.values()), max(values.values())
            width = (vmax - vmin) or 1.0
            for label, v in values.items():
                fills[label] = colormap_color((v - vmin) / width, style.colormap)
    shown = set(COMPASS_LABELS) if style.show_labels is None else set(style.show_labels)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{style.size}" height="{style.size}" '
        f'viewBox="0 0 {style.size} {style.size}">',
        f'<rect x="0" y="0" width="{style.size}" height="{style.size}" fill="white"/>',
    ]
    for label, (x, y) in zip(embedding.labels, screen):
        attrs = f'cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(style.radius)}" fill={quoteattr(fills[label])}'
        attrs += f" data-label={quoteattr(label)}"
        if label in values:
            attrs += f' data-value="{format_float(values[label])}"'
        out.append(f"<circle {attrs}/>")
    for label, (x, y) in zip(embedding.labels, screen):
        if label in shown:
            out.append(
                f'<text x="{_fmt(x + style.radius + 2)}" y="{_fmt(y - style.radius - 2)}" '
                f'font-family="sans-serif" font-size="14">{escape(label)}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Dataset directories
# ---------------------------------------------------------------------------

INDEX_FILE = "index.csv"
INDEX_HEADER = ("label", "family", "culture", "seed", "color", "m", "n", "file")


@dataclass(frozen=True)
class StoredElection:
    label: str
    family: str
    culture: str
    seed: int
    color: str
    election: OrdinalElection | ApprovalElection


def write_dataset(directory: Path | str, items: Sequence[StoredElection]) -> None:
    """One election file per item plus ``index.csv`` describing them."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, item in enumerate(items):
        approval = isinstance(item.election, ApprovalElection)
        name = f"{i:05d}.{'app' if approval else 'soc'}.txt"
        text = format_approval(item.election) if approval else format_election(item.election)
        (directory / name).write_text(text)
        m = item.election.num_candidates
        rows.append([item.label, item.family, item.culture, item.seed, item.color, m, item.election.num_voters, name])
    (directory / INDEX_FILE).write_text(_csv_text(INDEX_HEADER, rows))


def read_dataset(directory: Path | str) -> list[StoredElection]:
    directory = Path(directory)
    index = directory / INDEX_FILE
    if not index.is_file():
        raise ConfigError(f"{directory} has no {INDEX_FILE}")
    rows = _csv_rows(index.read_text(), INDEX_HEADER)
    items = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(INDEX_HEADER):
            raise ParseError("wrong number of index columns", lineno)
        label, family, culture, seed, color, _, _, name = row
        text = (directory / name).read_text()
        election = parse_approval(text) if name.endswith(".app.txt") else parse_election(text)
        items.append(StoredElection(label, family, culture, int(seed), color, election))
    return items


def generate_from_config(config: ExperimentConfig) -> list[StoredElection]:
    """Sample every election of a configuration.

    The election with global index ``i`` is drawn with seed ``config.seed ^ i``;
    an entry with its own ``seed`` uses ``entry.seed ^ j`` for its ``j``-th
    election instead.  Labels are ``f"{label}_{j}"``, or the bare label for
    single-election entries.
    """
    from .approval import sample_approval
    from .cultures import dataset_seed, sample_election

    items: list[StoredElection] = []
    index = 0
    for entry in config.entries:
        for j in range(entry.count):
            base, offset = (config.seed, index) if entry.seed is None else (entry.seed, j)
            seed = dataset_seed(base, offset)
            if config.kind == "approval":
                election = sample_approval(entry.culture, entry.m, entry.n, seed)
            else:
                election = sample_election(entry.culture, entry.m, entry.n, seed)
            label = entry.label if entry.count == 1 else f"{entry.label}_{j}"
            items.append(StoredElection(label, entry.label, entry.culture, seed, entry.color, election))
            index += 1
    if len({item.label for item in items}) != len(items):
        raise ConfigError("generated election labels collide; rename the dataset entries")
    return items
