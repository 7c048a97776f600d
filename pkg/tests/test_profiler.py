import pytest

from oracle import ref_tokenize
from stringforge import profiler
from stringforge.patterns import Token, TokenClass, covers, lit, parse_pattern, render_pattern
from stringforge.profiler import (
    PatternCluster,
    build_hierarchy,
    cluster_initial,
    discover_constants,
    find_node,
    get_parent,
    hierarchy_to_json,
    refine,
    refine_with_children,
    tokenize,
)

D = TokenClass.DIGIT
L = TokenClass.LOWER
U = TokenClass.UPPER


class TestTokenize:
    def test_email_golden(self):
        ts = tokenize("Bob123@gmail.com")
        assert ts.tokens == (
            Token(U),
            Token(L, 2),
            Token(D, 3),
            lit("@"),
            Token(L, 5),
            lit("."),
            Token(L, 3),
        )

    def test_single_digit(self):
        assert tokenize("7").tokens == (Token(D, 1),)

    def test_empty_string(self):
        ts = tokenize("")
        assert ts.tokens == ()
        assert ts.spans == ()

    @pytest.mark.parametrize(
        "s",
        [
            "Bob123@gmail.com",
            "(734) 645-8397",
            "a_b-c",
            "--",
            "Dr. Brown",
            "ABCdef123",
            "café 12",  # non-ASCII letters are literals, not lowercase runs
            " \t ",
        ],
    )
    def test_agrees_with_reference_scanner(self, s):
        assert tokenize(s).pattern == ref_tokenize(s)

    def test_spans_tile_the_string(self):
        s = "(734) 645-8397"
        ts = tokenize(s)
        assert "".join(s[a:b] for a, b in ts.spans) == s
        assert ts.spans[0] == (0, 1)
        assert ts.spans[-1] == (10, 14)


class TestClusterInitial:
    def test_groups_by_leaf_pattern(self):
        clusters = cluster_initial(["a1", "b2", "cc"])
        assert [(render_pattern(c.pattern), c.count) for c in clusters] == [
            ("<L><D>", 2),
            ("<L>2", 1),
        ]
        assert clusters[0].members == (0, 1)

    def test_identical_rows_one_cluster(self):
        clusters = cluster_initial(["x9"] * 4)
        assert len(clusters) == 1
        assert clusters[0].count == 4

    def test_empty_rows_excluded(self):
        assert cluster_initial(["", ""]) == []

    def test_ties_break_on_pattern_text(self):
        clusters = cluster_initial(["b2", "2b"])
        assert [render_pattern(c.pattern) for c in clusters] == ["<D><L>", "<L><D>"]


class TestDiscoverConstants:
    def run(self, rows, **kw):
        (cluster,) = cluster_initial(rows)
        return render_pattern(discover_constants(cluster, rows, **kw).pattern)

    def test_constant_column_becomes_literal(self):
        assert self.run(["CPT-00350", "CPT-00340"]) == "'CPT''-'<D>5"

    def test_varying_tokens_stay(self):
        assert self.run(["AB-1", "CD-2"]) == "<U>2'-'<D>"

    def test_singleton_cluster_untouched(self):
        assert self.run(["CPT-00350"]) == "<U>3'-'<D>5"

    def test_title_prefix_fuses_through_old_punctuation(self):
        assert self.run(["Dr. Bob", "Dr. Max"]) == "'Dr.'' '<U><L>2"

    def test_existing_literal_never_starts_a_run(self):
        assert self.run(["[CPT-12", "[CPT-34"]) == "'[''CPT''-'<D>2"

    def test_run_stops_at_varying_token(self):
        assert self.run(["No.7!", "No.9!"]) == "'No.'<D>'!'"

    def test_dash_and_underscore_never_fuse(self):
        assert self.run(["ID-X_1", "ID-Y_2"]) == "'ID''-'<U>'_'<D>"

    def test_theta_majority(self):
        assert self.run(["a1", "a2", "b3"], theta=0.5) == "'a'<D>"
        assert self.run(["a1", "a2", "b3"], theta=1.0) == "<L><D>"

    def test_min_count_guard(self):
        (cluster,) = cluster_initial(["zz"])
        out = discover_constants(cluster, ["zz"], min_count=1)
        assert render_pattern(out.pattern) == "'zz'"


class TestGetParent:
    def test_strategy_1_widens_counts(self):
        leaf = parse_pattern("<U><L>2<D>3'@'<L>5'.'<L>3")
        assert render_pattern(get_parent(leaf, 1)) == "<U><L>+<D>+'@'<L>+'.'<L>+"

    def test_strategy_2_merges_cases(self):
        p1 = parse_pattern("<U><L>+<D>+'@'<L>+'.'<L>+")
        assert render_pattern(get_parent(p1, 2)) == "<A>+<D>+'@'<A>+'.'<A>+"

    def test_strategy_3_alnum(self):
        p2 = parse_pattern("<A>+<D>+'@'<A>+'.'<A>+")
        assert render_pattern(get_parent(p2, 3)) == "<AN>+'@'<AN>+'.'<AN>+"

    def test_strategy_3_absorbs_dash_and_underscore(self):
        p = parse_pattern("<D>+'-'<D>+'_'<A>+")
        assert render_pattern(get_parent(p, 3)) == "<AN>+"

    def test_strategy_3_keeps_other_literals(self):
        p = parse_pattern("<D>+'.'<D>+")
        assert render_pattern(get_parent(p, 3)) == "<AN>+'.'<AN>+"

    def test_adjacent_naturals_merge_by_sum(self):
        p = parse_pattern("<U>2<L>3")
        assert render_pattern(get_parent(p, 2)) == "<A>5"

    @pytest.mark.parametrize("strategy", [1, 2, 3])
    def test_idempotent(self, strategy):
        p = parse_pattern("<U><L>2<D>3'@'<L>5'.'<L>3")
        once = get_parent(p, strategy)
        assert get_parent(once, strategy) == once

    def test_parent_covers_child(self):
        for text in ["<U><L>2", "<D>3'-'<D>4", "'['<U>3'-'<D>5']'"]:
            p = parse_pattern(text)
            for strategy in (1, 2, 3):
                assert covers(get_parent(p, strategy), p)

    def test_unknown_strategy(self):
        with pytest.raises(ValueError):
            get_parent(parse_pattern("<D>"), 4)


class TestRefine:
    def test_siblings_share_a_parent(self):
        clusters = cluster_initial(["Abc", "Abcdef"])
        parents = refine(clusters, 1)
        assert [render_pattern(p.pattern) for p in parents] == ["<U><L>+"]
        assert parents[0].members == (0, 1)

    def test_children_partition_members(self):
        clusters = cluster_initial(["ab", "cd", "XY", "x1"])
        pairs = refine_with_children(clusters, 2)
        seen = sorted(i for parent, _ in pairs for i in parent.members)
        assert seen == [0, 1, 2, 3]

    def test_single_cluster_passthrough(self):
        clusters = cluster_initial(["a1", "b2"])
        parents = refine(clusters, 1)
        assert [render_pattern(p.pattern) for p in parents] == ["<L><D>"]

    def test_linear_work(self, monkeypatch):
        calls = {"n": 0}
        real = profiler.get_parent

        def counting(p, strategy):
            calls["n"] += 1
            return real(p, strategy)

        monkeypatch.setattr(profiler, "get_parent", counting)
        clusters = cluster_initial(["ab", "cde", "XY", "x1", "9", "77"])
        refine(clusters, 1)
        assert calls["n"] == len(clusters)


class TestBuildHierarchy:
    def test_email_chain(self):
        h = build_hierarchy(["Bob123@gmail.com"])
        assert len(h.roots) == 1
        chain = []
        node = h.roots[0]
        while True:
            chain.append(render_pattern(node.pattern))
            if not node.children:
                break
            (node,) = node.children
        assert chain == [
            "<AN>+'@'<AN>+'.'<AN>+",
            "<A>+<D>+'@'<A>+'.'<A>+",
            "<U><L>+<D>+'@'<L>+'.'<L>+",
            "<U><L>2<D>3'@'<L>5'.'<L>3",
        ]
        assert [n.level for n in h.walk()] == [3, 2, 1, 0]

    def test_empty_input(self):
        h = build_hierarchy([])
        assert h.roots == ()
        assert h.empty_rows == ()

    def test_empty_rows_reserved(self):
        h = build_hierarchy(["", "a", ""])
        assert h.empty_rows == (0, 2)
        assert h.roots[0].count == 1

    def test_every_edge_covers(self):
        rows = ["(734) 645-8397", "734-422-8073", "734.236.3466", "(734)586-7252", "x"]
        h = build_hierarchy(rows)
        for node in h.walk():
            for child in node.children:
                assert covers(node.pattern, child.pattern)

    def test_layers_partition_rows(self):
        rows = ["a1", "bb2", "CC", "d-3", "e.4", "a1"]
        h = build_hierarchy(rows)
        by_level = {0: [], 1: [], 2: [], 3: []}
        for node in h.walk():
            by_level[node.level].append(node)
        for level, nodes in by_level.items():
            members = sorted(i for n in nodes for i in n.cluster.members)
            assert members == list(range(len(rows))), f"level {level}"

    def test_order_insensitive(self):
        rows = ["a1", "bb22", "C3", "dd4", "e5"]
        a = hierarchy_to_json(build_hierarchy(rows), rows)

        def strip_samples(doc):
            return [
                {
                    "pattern": n["pattern"],
                    "count": n["count"],
                    "children": strip_samples(n["children"]),
                }
                for n in doc
            ]

        flipped = list(reversed(rows))
        b = hierarchy_to_json(build_hierarchy(flipped), flipped)
        assert strip_samples(a["roots"]) == strip_samples(b["roots"])


class TestHierarchyJson:
    def test_shape_and_ids(self):
        rows = ["ab", "cd", "x1"]
        h = build_hierarchy(rows)
        doc = hierarchy_to_json(h, rows)
        assert doc["empty_rows"] == 0
        first = doc["roots"][0]
        assert set(first) == {"id", "pattern", "regex", "count", "sample", "children"}
        ids = []

        def collect(node):
            ids.append(node["id"])
            for c in node["children"]:
                collect(c)

        for r in doc["roots"]:
            collect(r)
        assert ids == [str(i) for i in range(len(ids))]

    def test_samples_capped_at_five(self):
        rows = [f"a{i}" for i in range(10)]
        doc = hierarchy_to_json(build_hierarchy(rows), rows)
        assert len(doc["roots"][0]["sample"]) == 5

    def test_find_node_matches_ids(self):
        rows = ["ab", "cd", "x1"]
        h = build_hierarchy(rows)
        doc = hierarchy_to_json(h, rows)
        leaf_id = doc["roots"][0]["children"][0]["children"][0]["children"][0]["id"]
        node = find_node(h, leaf_id)
        assert node is not None
        assert render_pattern(node.pattern) == doc["roots"][0]["children"][0]["children"][0]["children"][0]["pattern"]
        assert find_node(h, "999") is None
        assert find_node(h, "bogus") is None
