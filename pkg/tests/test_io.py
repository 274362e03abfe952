from collections import Counter
from xml.etree import ElementTree

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from electionmap import io as eio
from electionmap.core import DistanceMatrix, OrdinalElection, borda_vector
from electionmap.embedding import Embedding
from electionmap.errors import ConfigError, DomainError, ParseError

from .conftest import approval_elections, elections, votes_from_letters

SVG = "{http://www.w3.org/2000/svg}"

MODERN = """\
# FILE NAME: example.soi
# DATA TYPE: soi
# NUMBER ALTERNATIVES: 4
# ALTERNATIVE NAME 1: Alice
# ALTERNATIVE NAME 2: Bob
# ALTERNATIVE NAME 3: Carol
# ALTERNATIVE NAME 4: Dan
# NUMBER VOTERS: 6
3: 1,2,3,4
2: 2,{1,4}
1: 4
"""

CLASSIC = """\
3
1,Red
2,Green
3,Blue
5,5,2
3,1,2,3
2,3,2,1
"""

CONFIG = """\
[experiment]
kind = ordinal
seed = 7
metric = discrete
embedding = mds
budget = 1000
normalize = yes

[outputs]
map = picture.svg

[impartial]
culture = ic
count = 3
m = 4
n = 5
color = red

[single]
culture = mallows:phi=0.3
count = 1
m = 4
n = 5
seed = 99
"""


class TestElectionFormat:
    @given(elections(max_m=6, max_n=8))
    def test_round_trip(self, election):
        assert eio.parse_election(eio.format_election(election)) == election

    def test_runs_and_comments(self):
        election = votes_from_letters("abc", "abc", "cba")
        text = eio.format_election(election)
        assert text == "2 * 0 > 1 > 2\n2 > 1 > 0\n"
        assert eio.parse_election("# header\n\n" + text) == election

    @pytest.mark.parametrize(
        "text,line",
        [("0 > 1\n1 > x\n", 2), ("0 > 1\n0 > 1 > 2\n", 2), ("0 > 0\n", 1), ("0 * 0 > 1\n", 1), ("# only\n", None)],
    )
    def test_errors_carry_line_numbers(self, text, line):
        with pytest.raises(ParseError) as info:
            eio.parse_election(text)
        assert info.value.line == line


class TestApprovalFormat:
    @given(approval_elections(max_m=6, max_n=8))
    def test_round_trip(self, election):
        assert eio.parse_approval(eio.format_approval(election)) == election

    def test_empty_ballots_and_runs(self):
        text = "# candidates: 3\n2 * 0,2\n-\n"
        election = eio.parse_approval(text)
        assert [sorted(b) for b in election.votes] == [[0, 2], [0, 2], []]
        assert eio.format_approval(election) == text

    @pytest.mark.parametrize("text", ["0,1\n", "# candidates: 2\n0,5\n", "# candidates: 2\na\n", "# candidates: 2\n"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            eio.parse_approval(text)


class TestPrefLib:
    def test_modern_header(self):
        records, names = eio.parse_preflib_soc(MODERN.encode())
        assert names == ["Alice", "Bob", "Carol", "Dan"]
        assert [r.count for r in records] == [3, 2, 1]
        assert records[1].groups == ((1,), (0, 3))
        assert records[1].has_ties and not records[0].has_ties
        assert records[2].candidates == (3,)

    def test_classic_header(self):
        records, names = eio.parse_preflib_soc(CLASSIC)
        assert names == ["Red", "Green", "Blue"]
        assert [(r.count, r.candidates) for r in records] == [(3, (0, 1, 2)), (2, (2, 1, 0))]

    def test_round_trip(self):
        records, names = eio.parse_preflib_soc(MODERN)
        text = eio.format_preflib(records, names)
        assert "# DATA TYPE: toi" in text
        assert eio.parse_preflib_soc(text) == (records, names)

    @pytest.mark.parametrize(
        "text,line",
        [
            ("# NUMBER ALTERNATIVES: 2\n1: 1,3\n", 2),
            ("# NUMBER ALTERNATIVES: 2\nx: 1,2\n", 2),
            ("# NUMBER ALTERNATIVES: 2\n1: 1,1\n", 2),
            ("# NUMBER ALTERNATIVES: 2\n0: 1,2\n", 2),
            ("# NUMBER ALTERNATIVES: 3\n1: {1,2,3\n", 2),
            ("two\n", 1),
            ("# NUMBER ALTERNATIVES: 2\n", None),
        ],
    )
    def test_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            eio.parse_preflib_soc(text)
        assert info.value.line == line


class TestPreprocessing:
    def test_completion_is_deterministic_and_complete(self):
        records, names = eio.parse_preflib_soc(MODERN)
        first = eio.complete_votes(records, len(names), rng=3)
        assert first == eio.complete_votes(records, len(names), rng=3)
        assert first.shape == (4, 6)
        assert first.vote_list()[:3] == [(0, 1, 2, 3)] * 3

    def test_tie_breaking_is_uniform(self):
        record = eio.RawPrefRecord(((0, 1, 2),), count=6000)
        election = eio.complete_votes([record], 3, rng=0)
        counts = Counter(election.vote_list())
        assert len(counts) == 6
        assert stats.chisquare(list(counts.values())).pvalue > 1e-4

    def test_prefix_completion_follows_reference_votes(self):
        records = [
            eio.RawPrefRecord(((0,),), count=4000),
            eio.RawPrefRecord(((0,), (1,), (2,)), count=3),
            eio.RawPrefRecord(((0,), (2,), (1,)), count=1),
        ]
        election = eio.complete_votes(records, 3, rng=1)
        completed = Counter(election.vote_list()[:4000])
        assert set(completed) == {(0, 1, 2), (0, 2, 1)}
        assert stats.binomtest(completed[(0, 1, 2)], 4000, 0.75).pvalue > 1e-4

    def test_completion_without_references_is_uniform(self):
        election = eio.complete_votes([eio.RawPrefRecord(((2,),), count=3000)], 3, rng=2)
        counts = Counter(v[1] for v in election.vote_list())
        assert set(counts) == {0, 1}
        assert stats.binomtest(counts[0], 3000, 0.5).pvalue > 1e-4

    def test_completion_errors(self):
        with pytest.raises(DomainError):
            eio.complete_votes([], 3)
        with pytest.raises(DomainError):
            eio.complete_votes([eio.RawPrefRecord(((5,),))], 3)
        with pytest.raises(DomainError):
            eio.RawPrefRecord(((0,), ()))

    def test_restriction_keeps_highest_borda(self, rules_example):
        restricted, kept = eio.restrict_top_candidates(rules_example, 3, rng=0)
        scores = borda_vector(rules_example)
        assert sorted(scores[kept].tolist(), reverse=True) == sorted(scores.tolist(), reverse=True)[:3]
        assert restricted == rules_example.restrict(kept)
        with pytest.raises(DomainError):
            eio.restrict_top_candidates(rules_example, 0)

    def test_restriction_breaks_ties_randomly(self):
        election = OrdinalElection.from_votes([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
        kept = {tuple(eio.restrict_top_candidates(election, 1, rng=s)[1]) for s in range(30)}
        assert kept == {(0,), (1,), (2,)}

    def test_voter_sampling(self, rules_example):
        sample = eio.sample_voters(rules_example, 50, rng=4)
        assert sample.shape == (5, 50)
        assert set(sample.vote_list()) <= set(rules_example.vote_list())
        with pytest.raises(DomainError):
            eio.sample_voters(rules_example, 0)

    def test_names(self):
        names = ["Alice", "Bob, Jr.", 'Quote "Q"']
        assert eio.parse_names(eio.format_names(names)) == names
        with pytest.raises(ParseError):
            eio.parse_names("index,name\n1,Bob\n")


class TestTables:
    @given(st.integers(1, 6), st.data())
    def test_distance_round_trip(self, k, data):
        values = np.zeros((k, k))
        for i in range(k):
            for j in range(i + 1, k):
                values[i, j] = values[j, i] = data.draw(st.floats(0, 1e6, allow_nan=False).map(eio.format_float).map(float))
        matrix = DistanceMatrix(tuple(f"e{i}" for i in range(k)), values)
        parsed = eio.parse_distance_csv(eio.format_distance_csv(matrix))
        assert parsed.labels == matrix.labels
        np.testing.assert_array_equal(parsed.values, matrix.values)

    def test_distance_file_layout(self):
        matrix = DistanceMatrix(("a", "b"), np.array([[0.0, 1 / 3], [1 / 3, 0.0]]))
        assert eio.format_distance_csv(matrix) == "a,b\n0,0.333333333\n0.333333333,0\n"
        timing = eio.format_timing_csv(matrix.labels, np.array([[0, 0.5], [0.5, 0]]))
        assert timing == "label_a,label_b,seconds\na,b,0.5\n"

    @pytest.mark.parametrize(
        "text,line",
        [
            ("", 1),
            ("a,a\n0,1\n1,0\n", 1),
            ("a,b\n0,1\n", None),
            ("a,b\n0,1\n1\n", 3),
            ("a,b\n0,x\n1,0\n", 2),
            ("a,b\n1,1\n1,0\n", 2),
            ("a,b\n0,1\n2,0\n", 3),
        ],
    )
    def test_distance_errors(self, text, line):
        with pytest.raises(ParseError) as info:
            eio.parse_distance_csv(text)
        assert info.value.line == line

    def test_similarity_layout(self):
        text = eio.format_similarity_csv(["ic", "id"], np.array([[0.5, 0.1], [0.1, 1.0]]), np.zeros((2, 2)))
        assert text == "label_a,label_b,mean,std\nic,ic,0.5,0\nic,id,0.1,0\nid,id,1,0\n"

    def test_float_format(self):
        assert eio.format_float(-0.0) == "0"
        assert eio.format_float(2.0) == "2"
        assert eio.format_float(1 / 7) == "0.142857143"

    def test_coordinates_and_features(self):
        embedding = Embedding(("x", "y"), np.array([[0.5, -1.0], [2.0, 0.0]]), "kk")
        labels, points = eio.parse_coordinates_csv(eio.format_coordinates_csv(embedding))
        assert labels == ["x", "y"]
        np.testing.assert_array_equal(points, embedding.points)
        table = eio.format_table_csv(["label", "score"], [["x", 1.5], ["y", 2]])
        assert eio.parse_feature_column(table, "score") == {"x": 1.5, "y": 2.0}
        with pytest.raises(ParseError):
            eio.parse_feature_column(table, "missing")
        with pytest.raises(ParseError):
            eio.parse_coordinates_csv("label,x,y\nx,1\n")


class TestConfig:
    def test_parse(self):
        config = eio.parse_config(CONFIG)
        assert (config.seed, config.metric, config.embedding, config.budget, config.normalize) == (7, "discrete", "mds", 1000, True)
        assert config.outputs == {"map": "picture.svg"}
        assert [e.label for e in config.entries] == ["impartial", "single"]
        assert config.entries[0].color == "red" and config.entries[1].seed == 99

    def test_round_trip(self):
        config = eio.parse_config(CONFIG)
        assert eio.parse_config(eio.format_config(config)) == config

    @pytest.mark.parametrize(
        "text",
        [
            "[experiment]\nseed = 1\n",
            "[a]\nculture = ic\ncount = 0\nm = 3\nn = 3\n",
            "[a]\ncount = 1\nm = 3\nn = 3\n",
            "[a]\nculture = nonsense\ncount = 1\nm = 3\nn = 3\n",
            "[a]\nculture = ic\ncount = 1\nm = x\nn = 3\n",
            "[a]\nculture = ic\ncount = 1\nn = 3\n",
            "[a]\nculture = ic\ncount = 1\nm = 3\nn = 3\nshape = round\n",
            "[experiment]\nspeed = 3\n[a]\nculture = ic\ncount = 1\nm = 3\nn = 3\n",
            "[experiment]\nnormalize = maybe\n[a]\nculture = ic\ncount = 1\nm = 3\nn = 3\n",
            "[experiment]\nkind = ranked\n[a]\nculture = ic\ncount = 1\nm = 3\nn = 3\n",
            "[experiment]\nkind = approval\n[a]\nculture = borda\ncount = 1\nm = 3\nn = 3\n",
            "not an ini file",
        ],
    )
    def test_errors(self, text):
        with pytest.raises(ConfigError):
            eio.parse_config(text)

    def test_testbed_config(self):
        config = eio.testbed_config()
        assert sum(e.count for e in config.entries) == 344

    def test_generation_seeds(self):
        config = eio.parse_config(CONFIG)
        items = eio.generate_from_config(config)
        assert [i.label for i in items] == ["impartial_0", "impartial_1", "impartial_2", "single"]
        assert [i.seed for i in items] == [7 ^ 0, 7 ^ 1, 7 ^ 2, 99]
        assert [i.election for i in items] == [i.election for i in eio.generate_from_config(config)]

    def test_label_collisions(self):
        text = "[a]\nculture = ic\ncount = 2\nm = 3\nn = 3\n[a_1]\nculture = ic\ncount = 1\nm = 3\nn = 3\n"
        with pytest.raises(ConfigError):
            eio.generate_from_config(eio.parse_config(text))


class TestDatasets:
    def test_round_trip(self, tmp_path):
        ordinal = eio.generate_from_config(eio.parse_config(CONFIG))
        approval_config = eio.parse_config("[experiment]\nkind = approval\n[b]\nculture = ic:p=0.5\ncount = 2\nm = 4\nn = 3\n")
        items = ordinal + eio.generate_from_config(approval_config)
        eio.write_dataset(tmp_path, items)
        assert sorted(p.name for p in tmp_path.iterdir())[-1] == "index.csv"
        assert eio.read_dataset(tmp_path) == items

    def test_missing_index(self, tmp_path):
        with pytest.raises(ConfigError):
            eio.read_dataset(tmp_path)


class TestSvg:
    def test_structure(self):
        embedding = Embedding(("ID", "UN", "e<1>"), np.array([[0.0, 0.0], [1.0, 1.0], [0.5, 0.0]]), "kk")
        style = eio.MapStyle(colors={"ID": "blue"}, feature={"ID": 0.0, "UN": 1.0})
        root = ElementTree.fromstring(eio.render_svg_map(embedding, style))
        assert root.get("version") == "1.1"
        circles = root.findall(f"{SVG}circle")
        assert [c.get("data-label") for c in circles] == ["ID", "UN", "e<1>"]
        assert circles[0].get("fill") == eio.colormap_color(0.0)
        assert circles[1].get("fill") == eio.colormap_color(1.0)
        assert circles[2].get("fill") == "black" and circles[2].get("data-value") is None
        assert [t.text for t in root.findall(f"{SVG}text")] == ["ID", "UN"]
        # the y axis points up on screen
        assert float(circles[1].get("cy")) < float(circles[0].get("cy"))

    def test_colormap(self):
        assert eio.colormap_color(0.0) == "#440154"
        assert eio.colormap_color(1.0) == "#fde725"
        assert eio.colormap_color(0.5, "gray") == "#808080"
        assert eio.colormap_color(7.0, "gray") == "#ffffff"
        with pytest.raises(DomainError):
            eio.colormap_color(0.5, "jet")

    def test_empty_map(self):
        root = ElementTree.fromstring(eio.render_svg_map(Embedding((), np.zeros((0, 2)), "kk")))
        assert root.findall(f"{SVG}circle") == []
