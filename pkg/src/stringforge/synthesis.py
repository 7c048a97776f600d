"""Synthesis of transformation programs from a pattern hierarchy.

Given a labeled target pattern, the synthesizer walks the hierarchy top-down
looking for source patterns worth transforming: nodes already covered by the
target are left alone, nodes that pass a cheap per-class frequency check
become transformation sources, and failing nodes are explored further (a
failing leaf is reported as unmatchable).

For each source, candidate plans come from a token-alignment graph: one node
per gap between target tokens, and an edge for every way to produce the next
target token (copy a compatible source token, or emit a literal's constant).
Adjacent copies over adjacent source tokens chain into wider copies, so whole
runs can transfer in one expression.  Every path from the first node to the
last is a plan; duplicates that differ only in how they spell a constant are
collapsed; the survivors are ranked by a two-part description length (shorter
programs first, with constants priced per character and copies priced by the
source's token count).
"""
from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass, replace

from .patterns import Pattern, Token, covers, render_pattern, token_frequency, BASE_CLASSES
from .profiler import ClusterNode, PatternHierarchy, build_hierarchy, hierarchy_to_json
from .programs import (
    ConstStr,
    Extract,
    MatchPredicate,
    Program,
    TransformationPlan,
    apply_row,
    explain,
    plan_to_json,
)

_LOG_PRINTABLE = math.log2(95)  # alphabet size charged per constant character


def validate(source: Pattern, target: Pattern) -> bool:
    """Per-class quantifier mass check: can the source even feed the target?

    For each base class the source must carry at least as much guaranteed
    mass as the target demands (``+`` counts as 1 on both sides).  This is a
    fast-reject filter, tuned for precision over recall: it assumes each
    source token feeds at most one copy.
    """
    return all(
        token_frequency(cls, source) >= token_frequency(cls, target)
        for cls in BASE_CLASSES
    )


def syntactically_similar(target_tok: Token, source_tok: Token) -> bool:
    """May this source token be copied verbatim into this target slot?

    Literals must be identical constants.  Class tokens must agree on class;
    their quantifiers must be equal naturals, or the target's must be ``+``
    (a ``+`` source feeding an exact-count slot would break on strings where
    the run length differs, so that direction is rejected).
    """
    if target_tok.is_literal or source_tok.is_literal:
        return (
            target_tok.is_literal
            and source_tok.is_literal
            and target_tok.text == source_tok.text
        )
    if target_tok.cls is not source_tok.cls:
        return False
    if target_tok.is_plus:
        return True
    return target_tok.reps == source_tok.reps


@dataclass(frozen=True)
class AlignmentDag:
    """Token-alignment graph: node ``i`` = "first ``i`` target tokens built".

    ``edges[(a, b)]`` lists every expression that produces target tokens
    ``a+1..b`` on any string matching the source.
    """

    node_count: int
    edges: "dict[tuple[int, int], tuple[ConstStr | Extract, ...]]"


def _expr_key(expr: "ConstStr | Extract") -> tuple:
    if isinstance(expr, Extract):
        return (0, expr.start, expr.end, "")
    return (1, 0, 0, expr.text)


def find_token_alignment(source: Pattern, target: Pattern) -> AlignmentDag:
    """Build the alignment graph for one source/target pair.

    Unit edges: every syntactically similar source token can fill a target
    slot, and literal target tokens can always be emitted as constants.  Then,
    scanning interior nodes left to right (freshly combined edges included),
    a copy arriving on source token ``q-1`` chains with a copy leaving on
    source token ``q`` into one wider copy.
    """
    m = len(target.tokens)
    edges: dict[tuple[int, int], list] = {}

    def add(a: int, b: int, expr) -> None:
        bucket = edges.setdefault((a, b), [])
        if expr not in bucket:
            bucket.append(expr)

    for i, t_tok in enumerate(target.tokens, start=1):
        for j, s_tok in enumerate(source.tokens, start=1):
            if syntactically_similar(t_tok, s_tok):
                add(i - 1, i, Extract(j, j))
        if t_tok.is_literal:
            add(i - 1, i, ConstStr(t_tok.text))

    for i in range(1, m):
        incoming = sorted(
            (
                (a, expr)
                for (a, b), bucket in edges.items()
                if b == i
                for expr in bucket
                if isinstance(expr, Extract)
            ),
            key=lambda pair: (pair[0], pair[1].start, pair[1].end),
        )
        outgoing = [
            expr
            for expr in edges.get((i, i + 1), [])
            if isinstance(expr, Extract)
        ]
        for a, left in incoming:
            for right in outgoing:
                if left.end + 1 == right.start:
                    add(a, i + 1, Extract(left.start, right.end))

    return AlignmentDag(
        m + 1,
        {ab: tuple(sorted(bucket, key=_expr_key)) for ab, bucket in sorted(edges.items())},
    )


# ---------------------------------------------------------------------------
# Ranking
# ---------------------------------------------------------------------------


def description_length(
    plan: TransformationPlan, source: Pattern, target: "Pattern | None" = None
) -> float:
    """Two-part code length of a plan, in bits (lower ranks first).

    Structure cost: one symbol per expression over the plan's operation
    alphabet (1 or 2 distinct kinds).  Parameter cost: a copy names two
    positions among the source's ``n`` tokens (``2 log n``); a constant pays
    per character over the printable alphabet.  Costs are summed with
    ``math.fsum`` so equal multisets tie exactly regardless of order.
    """
    n = len(source.tokens)
    kinds = len({type(op) for op in plan.exprs})
    terms = [len(plan.exprs) * math.log2(kinds) if kinds else 0.0]
    for op in plan.exprs:
        if isinstance(op, ConstStr):
            terms.append(len(op.text) * _LOG_PRINTABLE)
        else:
            terms.append(2 * math.log2(n) if n > 1 else 0.0)
    return math.fsum(terms)


def _canonical_units(plan: TransformationPlan, source: Pattern) -> tuple:
    """Per-token normal form: copies split up, constant-valued copies renamed.

    Two plans are interchangeable exactly when they agree unit by unit, where
    a copy of a literal source token counts as the constant it always yields
    and runs of adjacent constants fuse into one.
    """
    units: list[tuple[str, object]] = []

    def push(kind: str, value) -> None:
        if kind == "c" and units and units[-1][0] == "c":
            units[-1] = ("c", units[-1][1] + value)
        else:
            units.append((kind, value))

    for op in plan.exprs:
        if isinstance(op, ConstStr):
            push("c", op.text)
        else:
            for j in range(op.start, op.end + 1):
                tok = source.tokens[j - 1]
                if tok.is_literal:
                    push("c", tok.text)
                else:
                    push("e", j)
    return tuple(units)


def plans_equivalent(
    p1: TransformationPlan, p2: TransformationPlan, source: Pattern
) -> bool:
    """Do two plans produce the same output on every string matching source?"""
    return _canonical_units(p1, source) == _canonical_units(p2, source)


def _inversions(plan: TransformationPlan) -> int:
    """Adjacent copy pairs that move backwards (or re-read) in the source."""
    extracts = [op for op in plan.exprs if isinstance(op, Extract)]
    return sum(
        1
        for prev, nxt in zip(extracts, extracts[1:])
        if nxt.start <= prev.end
    )


def _const_chars(plan: TransformationPlan) -> int:
    return sum(len(op.text) for op in plan.exprs if isinstance(op, ConstStr))


def _rank_key(plan: TransformationPlan, source: Pattern) -> tuple:
    return (
        description_length(plan, source),
        len(plan.exprs),
        _const_chars(plan),
        _inversions(plan),
        json.dumps(plan_to_json(plan)),
    )


@dataclass(frozen=True)
class RankedPlans:
    """Deduplicated candidate plans for one source, best first."""

    source: Pattern
    plans: tuple[tuple[TransformationPlan, float], ...]
    default_index: int = 0
    truncated: bool = False

    @property
    def default_plan(self) -> TransformationPlan:
        return self.plans[self.default_index][0]


def enumerate_plans(
    dag: AlignmentDag,
    source: Pattern,
    target: Pattern,
    k: int = 5,
    max_paths: int = 10000,
) -> RankedPlans:
    """All start-to-end paths through the graph, deduplicated and ranked.

    Path enumeration stops (and is flagged) at ``max_paths``.  Equivalent
    plans collapse to the lowest-cost representative; representatives are
    ordered by description length, then fewer expressions, fewer constant
    characters, fewer backward copies (so field order is kept on ties), and
    finally their serialized form.  The best ``k + 1`` survive: one default
    plus up to ``k`` alternates.
    """
    m = dag.node_count - 1
    out_edges: dict[int, list] = {}
    for (a, b), bucket in dag.edges.items():
        for expr in bucket:
            out_edges.setdefault(a, []).append((b, expr))
    for a in out_edges:
        out_edges[a].sort(key=lambda be: (be[0], _expr_key(be[1])))

    paths: list[tuple] = []
    truncated = False

    def walk(node: int, acc: list) -> None:
        nonlocal truncated
        if truncated:
            return
        if node == m:
            if len(paths) >= max_paths:
                truncated = True
                return
            paths.append(tuple(acc))
            return
        for b, expr in out_edges.get(node, ()):
            acc.append(expr)
            walk(b, acc)
            acc.pop()
            if truncated:
                return

    if m > 0:
        walk(0, [])

    best_by_class: dict[tuple, TransformationPlan] = {}
    key_cache: dict[TransformationPlan, tuple] = {}

    def key_of(plan: TransformationPlan) -> tuple:
        if plan not in key_cache:
            key_cache[plan] = _rank_key(plan, source)
        return key_cache[plan]

    for path in paths:
        plan = TransformationPlan(path)
        canon = _canonical_units(plan, source)
        held = best_by_class.get(canon)
        if held is None or key_of(plan) < key_of(held):
            best_by_class[canon] = plan

    ranked = sorted(best_by_class.values(), key=key_of)[: k + 1]
    return RankedPlans(
        source=source,
        plans=tuple((plan, description_length(plan, source)) for plan in ranked),
        default_index=0,
        truncated=truncated,
    )


# ---------------------------------------------------------------------------
# Hierarchy traversal and repair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SynthesisResult:
    """Chosen sources with their ranked plans, plus unmatchable patterns."""

    target: Pattern
    per_source: tuple[RankedPlans, ...]
    unmatched_patterns: tuple[Pattern, ...]

    @property
    def program(self) -> Program:
        return Program(
            tuple(
                (MatchPredicate(rp.source), rp.default_plan)
                for rp in self.per_source
            )
        )


def synthesize(
    hierarchy: PatternHierarchy, target: Pattern, k: int = 5
) -> SynthesisResult:
    """Pick transformation sources from the hierarchy and plan each of them.

    Walking down from the roots: nodes covered by the target are already in
    shape and their subtrees are skipped; nodes passing :func:`validate`
    become sources (their subtrees are skipped too, keeping branches few);
    other nodes are expanded, and failing leaves are unmatchable.  Branches
    are ordered most specific first: lower level, then larger cluster, then
    pattern text.  Sources whose alignment yields no plan join the
    unmatchable set.
    """
    frontier: list[ClusterNode] = []
    unmatched: list[Pattern] = []

    def visit(node: ClusterNode) -> None:
        if covers(target, node.pattern):
            return
        if validate(node.pattern, target):
            frontier.append(node)
            return
        if node.children:
            for child in node.children:
                visit(child)
        else:
            unmatched.append(node.pattern)

    for root in hierarchy.roots:
        visit(root)

    frontier.sort(key=lambda nd: (nd.level, -nd.count, render_pattern(nd.pattern)))
    per_source: list[RankedPlans] = []
    for node in frontier:
        dag = find_token_alignment(node.pattern, target)
        ranked = enumerate_plans(dag, node.pattern, target, k)
        if ranked.plans:
            per_source.append(ranked)
        else:
            unmatched.append(node.pattern)

    unique_unmatched = tuple(dict.fromkeys(unmatched))
    return SynthesisResult(target, tuple(per_source), unique_unmatched)


def result_to_json(
    result: SynthesisResult,
    column: str = "column1",
    rows: Sequence[str] | None = None,
) -> dict:
    """Wire form shared by the CLI and the HTTP service.

    ``script`` holds the human-readable regexp-replace line for each branch;
    ``branches`` carries every ranked plan with its cost so a caller can
    preview and pick alternates; ``unmatched`` lists patterns no plan reaches.
    When the corpus is supplied, ``post_transform`` re-profiles the outputs so
    the effect can be verified cluster-by-cluster; rows no branch matched pass
    through unchanged and are counted per cluster they land in.
    """
    program = result.program
    doc = {
        "target": render_pattern(result.target),
        "script": [op.render() for op in explain(program, column=column)],
        "branches": [
            {
                "source": render_pattern(ranked.source),
                "default_index": ranked.default_index,
                "default": plan_to_json(ranked.default_plan),
                "truncated": ranked.truncated,
                "alternates": [
                    {"plan": plan_to_json(plan), "dl": dl}
                    for plan, dl in ranked.plans
                ],
            }
            for ranked in result.per_source
        ],
        "unmatched": [render_pattern(p) for p in result.unmatched_patterns],
    }
    if rows is not None:
        doc["post_transform"] = _post_transform_json(result, rows)
    return doc


def _post_transform_json(result: SynthesisResult, rows: Sequence[str]) -> dict:
    """Re-profiled clustering of the program's outputs over a corpus."""
    program = result.program
    outputs: list[str] = []
    statuses: list[str] = []
    for row in rows:
        out, status = apply_row(program, row, target=result.target)
        outputs.append(out)
        statuses.append(status)
    unmatched_rows = {i for i, s in enumerate(statuses) if s == "unmatched"}

    hierarchy = build_hierarchy(outputs)
    doc = hierarchy_to_json(hierarchy, outputs)

    def annotate(node_doc: dict, node: ClusterNode) -> None:
        node_doc["unmatched_members"] = sum(
            1 for i in node.cluster.members if i in unmatched_rows
        )
        for child_doc, child in zip(node_doc["children"], node.children):
            annotate(child_doc, child)

    for root_doc, root in zip(doc["roots"], hierarchy.roots):
        annotate(root_doc, root)
    doc["status_counts"] = {
        status: statuses.count(status)
        for status in ("transformed", "already_conforming", "unmatched")
    }
    return doc


def repair(result: SynthesisResult, source: Pattern, chosen: int) -> SynthesisResult:
    """Swap one branch's default plan for the alternate at ``chosen``."""
    for idx, ranked in enumerate(result.per_source):
        if ranked.source == source:
            if not 0 <= chosen < len(ranked.plans):
                raise ValueError(
                    f"alternate index {chosen} out of range for "
                    f"{render_pattern(source)} ({len(ranked.plans)} plans)"
                )
            swapped = replace(ranked, default_index=chosen)
            return replace(
                result,
                per_source=result.per_source[:idx] + (swapped,) + result.per_source[idx + 1 :],
            )
    raise ValueError(f"no branch has source pattern {render_pattern(source)}")
