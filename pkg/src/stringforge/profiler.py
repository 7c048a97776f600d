"""Column profiling: tokenize rows, cluster by shape, build a pattern hierarchy.

Rows are tokenized losslessly, grouped by identical leaf pattern, and the leaf
patterns are then generalized bottom-up through three rewrite strategies:

1. repetition counts above 1 widen to ``+``;
2. lowercase/uppercase classes widen to letters;
3. letters, digits, and the ``-``/``_`` symbols widen to the alphanumeric
   class.

Each strategy is applied greedily across the whole cluster set so that shapes
which become indistinguishable merge into one parent cluster.  The result is a
four-level hierarchy (leaves plus one level per strategy) whose every node
covers all of its children.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Sequence

from .patterns import (
    ALNUM_SYMBOLS,
    PLUS,
    Pattern,
    Token,
    TokenClass,
    covers,
    render_pattern,
    render_regex,
)

STRATEGIES = (1, 2, 3)


@dataclass(frozen=True)
class TokenizedString:
    """A raw string plus its token sequence and per-token character spans."""

    raw: str
    tokens: tuple[Token, ...]
    spans: tuple[tuple[int, int], ...]

    @property
    def pattern(self) -> Pattern:
        return Pattern(self.tokens)


def _char_class(c: str) -> "TokenClass | None":
    if c.isascii():
        if c.isdigit():
            return TokenClass.DIGIT
        if c.islower():
            return TokenClass.LOWER
        if c.isupper():
            return TokenClass.UPPER
    return None


def tokenize(s: str) -> TokenizedString:
    """Split a string into maximal digit/lower/upper runs and symbol literals.

    Every character outside the three alphanumeric classes (including ``-``,
    ``_``, whitespace, and non-ASCII characters) becomes its own
    single-character literal token.  The decomposition is lossless: token
    spans tile the input.  An empty string yields an empty token sequence.
    """
    tokens: list[Token] = []
    spans: list[tuple[int, int]] = []
    i = 0
    n = len(s)
    while i < n:
        cls = _char_class(s[i])
        if cls is None:
            tokens.append(Token(TokenClass.LITERAL, 1, s[i]))
            spans.append((i, i + 1))
            i += 1
            continue
        j = i + 1
        while j < n and _char_class(s[j]) is cls:
            j += 1
        tokens.append(Token(cls, j - i))
        spans.append((i, j))
        i = j
    return TokenizedString(s, tuple(tokens), tuple(spans))


@dataclass(frozen=True)
class PatternCluster:
    """A pattern plus the indices of the rows it describes."""

    pattern: Pattern
    members: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.members)


def _cluster_order(cluster: PatternCluster) -> tuple:
    return (-cluster.count, render_pattern(cluster.pattern))


def cluster_initial(rows: Sequence[str]) -> list[PatternCluster]:
    """Group non-empty rows by identical leaf pattern, largest cluster first.

    Empty rows have no tokens and are excluded here; callers that need them
    (see :func:`build_hierarchy`) track them in a reserved bucket.
    """
    groups: dict[Pattern, list[int]] = defaultdict(list)
    for idx, row in enumerate(rows):
        if row == "":
            continue
        groups[tokenize(row).pattern].append(idx)
    clusters = [PatternCluster(p, tuple(ids)) for p, ids in groups.items()]
    clusters.sort(key=_cluster_order)
    return clusters


def discover_constants(
    cluster: PatternCluster,
    rows: Sequence[str],
    theta: float = 1.0,
    min_count: int = 2,
) -> PatternCluster:
    """Replace class tokens whose realized text repeats across the cluster.

    A class token becomes a literal when at least ``theta`` of the member rows
    realize it as the same substring.  A run of newly discovered constants
    then absorbs the literals that follow it, fusing into one multi-character
    constant (e.g. ``Dr.``), with two exceptions that keep structure visible:
    whitespace never fuses, and neither do ``-``/``_`` (those two symbols
    belong to the alphanumeric class and generalizing them later would be
    blocked by a fused constant).  Pre-existing literals never start a run, so
    punctuation ahead of a constant (``[`` before ``CPT``) stays separate.
    """
    if cluster.count < min_count:
        return cluster
    tokenized = [tokenize(rows[i]) for i in cluster.members]
    toks = list(cluster.pattern.tokens)
    discovered = [False] * len(toks)
    for pos, tok in enumerate(toks):
        if tok.is_literal:
            continue
        values = Counter(ts.raw[ts.spans[pos][0] : ts.spans[pos][1]] for ts in tokenized)
        value, hits = values.most_common(1)[0]
        if hits / cluster.count >= theta:
            toks[pos] = Token(TokenClass.LITERAL, 1, value)
            discovered[pos] = True

    def mergeable(tok: Token) -> bool:
        return (
            tok.is_literal
            and tok.text not in ALNUM_SYMBOLS
            and not tok.text.isspace()
        )

    merged: list[Token] = []
    live: list[bool] = []  # merged[-1] holds a discovered constant and may grow
    for tok, new in zip(toks, discovered):
        if merged and live[-1] and mergeable(tok):
            merged[-1] = Token(TokenClass.LITERAL, 1, merged[-1].text + tok.text)
        else:
            merged.append(tok)
            live.append(new and mergeable(tok))
    return PatternCluster(Pattern(tuple(merged)), cluster.members)


def get_parent(pattern: Pattern, strategy: int) -> Pattern:
    """Apply one generalization strategy and merge adjacent same-class tokens.

    Strategy 1 widens repetition counts above 1 to ``+`` (a count of exactly 1
    stays put: a lone initial is structurally distinct from a word).  Strategy
    2 rewrites lower/upper to letters.  Strategy 3 rewrites letters, digits,
    and the ``-``/``_`` symbols to the alphanumeric class.  After rewriting,
    neighbouring class tokens of equal class fuse: their counts add when all
    natural, otherwise the fused token is ``+``.  Literals other than the two
    alphanumeric symbols are never touched.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy}")
    rewritten: list[Token] = []
    for tok in pattern.tokens:
        if strategy == 1:
            if not tok.is_literal and not tok.is_plus and tok.reps > 1:
                tok = Token(tok.cls, PLUS)
        elif strategy == 2:
            if tok.cls in (TokenClass.LOWER, TokenClass.UPPER):
                tok = Token(TokenClass.ALPHA, tok.reps)
        else:
            if tok.cls in (TokenClass.ALPHA, TokenClass.DIGIT):
                tok = Token(TokenClass.ALNUM, tok.reps)
            elif tok.is_literal and tok.text in ALNUM_SYMBOLS:
                tok = Token(TokenClass.ALNUM, 1)
        rewritten.append(tok)

    merged: list[Token] = []
    for tok in rewritten:
        prev = merged[-1] if merged else None
        if (
            prev is not None
            and not tok.is_literal
            and not prev.is_literal
            and prev.cls is tok.cls
        ):
            if prev.is_plus or tok.is_plus:
                merged[-1] = Token(tok.cls, PLUS)
            else:
                merged[-1] = Token(tok.cls, prev.reps + tok.reps)
        else:
            merged.append(tok)
    return Pattern(tuple(merged))


def refine_with_children(
    clusters: Sequence[PatternCluster], strategy: int
) -> list[tuple[PatternCluster, list[PatternCluster]]]:
    """One greedy generalization pass; returns each parent with its children.

    Every input pattern nominates a parent candidate; candidates are then
    emitted in descending nomination order (ties: more member rows, then
    pattern text) and each claims all still-unassigned clusters it covers.
    Candidates whose nominees were all claimed earlier are dropped.
    """
    nominations: Counter[Pattern] = Counter()
    member_mass: Counter[Pattern] = Counter()
    for cl in clusters:
        parent = get_parent(cl.pattern, strategy)
        nominations[parent] += 1
        member_mass[parent] += cl.count

    ranked = sorted(
        nominations,
        key=lambda p: (-nominations[p], -member_mass[p], render_pattern(p)),
    )
    remaining = list(clusters)
    out: list[tuple[PatternCluster, list[PatternCluster]]] = []
    for parent in ranked:
        taken, kept = [], []
        for cl in remaining:
            (taken if covers(parent, cl.pattern) else kept).append(cl)
        if not taken:
            continue
        remaining = kept
        members = tuple(sorted(i for cl in taken for i in cl.members))
        out.append((PatternCluster(parent, members), taken))
    out.sort(key=lambda pair: _cluster_order(pair[0]))
    return out


def refine(clusters: Sequence[PatternCluster], strategy: int) -> list[PatternCluster]:
    """Generalize a cluster set one level; every input lands under one parent."""
    return [parent for parent, _ in refine_with_children(clusters, strategy)]


@dataclass(frozen=True)
class ClusterNode:
    """A hierarchy node: one cluster at one level, with its child nodes."""

    cluster: PatternCluster
    level: int  # 0 = leaf, 3 = most general
    children: tuple["ClusterNode", ...] = ()

    @property
    def pattern(self) -> Pattern:
        return self.cluster.pattern

    @property
    def count(self) -> int:
        return self.cluster.count


@dataclass(frozen=True)
class PatternHierarchy:
    """Four-level generalization tree over a row set, most general at the top."""

    roots: tuple[ClusterNode, ...]
    empty_rows: tuple[int, ...]

    def walk(self):
        """Preorder traversal; order matches the ids of hierarchy_to_json."""

        def visit(node: ClusterNode):
            yield node
            for child in node.children:
                yield from visit(child)

        for root in self.roots:
            yield from visit(root)


def build_hierarchy(
    rows: Sequence[str], theta: float = 1.0, min_count: int = 2
) -> PatternHierarchy:
    """Profile a column: leaf clusters, constant discovery, three refinements.

    Rows equal to the empty string go into a reserved bucket instead of the
    tree (they have no tokens to generalize and are never transformation
    sources).  Every level is materialized even when a refinement pass changes
    nothing, so a single row always sits under a chain of four nodes.
    """
    empty = tuple(i for i, r in enumerate(rows) if r == "")
    leaves = [
        discover_constants(cl, rows, theta=theta, min_count=min_count)
        for cl in cluster_initial(rows)
    ]
    nodes = {cl: ClusterNode(cl, 0) for cl in leaves}
    for strategy in STRATEGIES:
        pairs = refine_with_children(list(nodes), strategy)
        nodes = {
            parent: ClusterNode(parent, strategy, tuple(nodes[k] for k in kids))
            for parent, kids in pairs
        }
    return PatternHierarchy(tuple(nodes.values()), empty)


def hierarchy_to_json(hierarchy: PatternHierarchy, rows: Sequence[str]) -> dict:
    """JSON tree: per node its pattern text, display regex, count, samples.

    Node ids are stable preorder positions, so identical inputs always get
    identical ids.
    """
    counter = [0]

    def node_json(node: ClusterNode) -> dict:
        node_id = str(counter[0])
        counter[0] += 1
        return {
            "id": node_id,
            "pattern": render_pattern(node.pattern),
            "regex": render_regex(node.pattern),
            "count": node.count,
            "sample": [rows[i] for i in node.cluster.members[:5]],
            "children": [node_json(c) for c in node.children],
        }

    return {
        "roots": [node_json(r) for r in hierarchy.roots],
        "empty_rows": len(hierarchy.empty_rows),
    }


def find_node(hierarchy: PatternHierarchy, node_id: str) -> "ClusterNode | None":
    """Look a node up by the id assigned in :func:`hierarchy_to_json`."""
    for position, node in enumerate(hierarchy.walk()):
        if str(position) == node_id:
            return node
    return None
