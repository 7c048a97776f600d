"""Switch-style string transformation programs and their explanations.

A program is an ordered list of branches.  Each branch pairs a match
predicate (a pattern that must match the whole input) with a transformation
plan: a concatenation of expressions that either copy a run of source tokens
(``Extract``, 1-based inclusive token indices) or emit a constant
(``ConstStr``).  Programs evaluate row by row; the first matching branch
wins, rows matching no branch pass through unchanged.

For display, each branch renders as a familiar regexp-replace operation:
``Replace '/^.../$/' in column1 with '...'``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .patterns import (
    Pattern,
    parse_pattern,
    pattern_matches,
    match_partition,
    render_pattern,
    render_regex,
)
from .profiler import TokenizedString, tokenize


@dataclass(frozen=True)
class ConstStr:
    text: str


@dataclass(frozen=True)
class Extract:
    """Copy source tokens ``start`` through ``end`` (1-based, inclusive)."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 1 or self.end < self.start:
            raise ValueError(f"bad extract range ({self.start}, {self.end})")


StringExpression = "ConstStr | Extract"


@dataclass(frozen=True)
class TransformationPlan:
    exprs: tuple["ConstStr | Extract", ...]


@dataclass(frozen=True)
class MatchPredicate:
    """Anchored whole-string match against a pattern."""

    pattern: Pattern

    def matches(self, s: str) -> bool:
        return pattern_matches(self.pattern, s)


@dataclass(frozen=True)
class Program:
    branches: tuple[tuple[MatchPredicate, TransformationPlan], ...]


class EvalStatus(Enum):
    TRANSFORMED = "transformed"
    UNMATCHED = "unmatched"


def eval_plan(plan: TransformationPlan, ts: TokenizedString, source: Pattern) -> str:
    """Run one plan over a string that matches ``source``.

    Extract ranges are resolved through the greedy left-to-right split of the
    raw string into one character span per source token, so a ``+`` token
    yields whatever run it actually matched.
    """
    part = match_partition(source, ts.raw)
    if part is None:
        raise ValueError(
            f"{ts.raw!r} does not match source pattern {render_pattern(source)}"
        )
    pieces: list[str] = []
    for op in plan.exprs:
        if isinstance(op, ConstStr):
            pieces.append(op.text)
        else:
            if op.end > len(part):
                raise ValueError(
                    f"extract ({op.start}, {op.end}) exceeds {len(part)} source tokens"
                )
            pieces.append(ts.raw[part[op.start - 1][0] : part[op.end - 1][1]])
    return "".join(pieces)


def eval_program(program: Program, s: str) -> tuple[str, EvalStatus]:
    """First matching branch transforms the row; otherwise it passes through."""
    ts = tokenize(s)
    for predicate, plan in program.branches:
        if predicate.matches(s):
            return eval_plan(plan, ts, predicate.pattern), EvalStatus.TRANSFORMED
    return s, EvalStatus.UNMATCHED


def apply_row(
    program: Program, s: str, target: "Pattern | None" = None
) -> tuple[str, str]:
    """Evaluate one row and report how it was handled.

    Rows no branch matches are checked against the target pattern (when one
    is known): a row already in the requested shape reports
    ``already_conforming`` rather than ``unmatched``.
    """
    out, status = eval_program(program, s)
    if status is EvalStatus.TRANSFORMED:
        return out, EvalStatus.TRANSFORMED.value
    if target is not None and pattern_matches(target, s):
        return s, "already_conforming"
    return s, EvalStatus.UNMATCHED.value


# ---------------------------------------------------------------------------
# Explanation as regexp-replace operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ReplaceOperation:
    match_regex: str
    replacement: str
    column: str

    def render(self) -> str:
        return f"Replace '{self.match_regex}' in {self.column} with '{self.replacement}'"


def _plan_segments(plan: TransformationPlan, source: Pattern) -> list:
    """Flatten a plan into constant text and single-token capture units.

    Extract ranges split into per-token units; units over literal source
    tokens contribute their (known) constant text rather than a capture, so
    the replacement string shows the symbols a reader expects to see.
    Consecutive class-token units re-fuse into one capture span.
    """
    segments: list = []  # str, or [start, end] 0-based token span

    def add_text(text: str) -> None:
        if segments and isinstance(segments[-1], str):
            segments[-1] += text
        else:
            segments.append(text)

    for op in plan.exprs:
        if isinstance(op, ConstStr):
            add_text(op.text)
            continue
        for idx in range(op.start - 1, op.end):
            tok = source.tokens[idx]
            if tok.is_literal:
                add_text(tok.text)
            elif segments and isinstance(segments[-1], list) and segments[-1][1] == idx - 1:
                segments[-1][1] = idx
            else:
                segments.append([idx, idx])
    return segments


def explain(
    program: Program,
    source_patterns: "Sequence[Pattern] | None" = None,
    column: str = "column1",
) -> list[ReplaceOperation]:
    """Render each branch as an anchored regexp-replace over ``column``.

    Capture groups are numbered left to right along the source pattern and
    referenced as ``$k`` in the replacement.  When a plan extracts the same
    tokens several times, or extracts overlapping runs, the groups fall back
    to one capture per token so each reference stays well-defined.
    """
    if source_patterns is not None:
        known = set(source_patterns)
        for predicate, _ in program.branches:
            if predicate.pattern not in known:
                raise ValueError(
                    f"branch pattern {render_pattern(predicate.pattern)} is not a known source"
                )
    ops: list[ReplaceOperation] = []
    for predicate, plan in program.branches:
        source = predicate.pattern
        segments = _plan_segments(plan, source)
        spans = sorted({tuple(seg) for seg in segments if isinstance(seg, list)})
        overlapping = any(
            spans[i][1] >= spans[i + 1][0] for i in range(len(spans) - 1)
        )
        if overlapping:
            # Re-split every capture into single-token groups.
            resplit: list = []
            for seg in segments:
                if isinstance(seg, str):
                    resplit.append(seg)
                else:
                    resplit.extend([i, i] for i in range(seg[0], seg[1] + 1))
            segments = resplit
            spans = sorted({tuple(seg) for seg in segments if isinstance(seg, list)})
        group_of = {span: i + 1 for i, span in enumerate(spans)}
        replacement = "".join(
            seg if isinstance(seg, str) else f"${group_of[tuple(seg)]}"
            for seg in segments
        )
        regex = render_regex(source, [tuple(s) for s in spans])
        ops.append(ReplaceOperation(regex, replacement, column))
    return ops


# ---------------------------------------------------------------------------
# JSON wire format
# ---------------------------------------------------------------------------


def plan_to_json(plan: TransformationPlan) -> list:
    out = []
    for op in plan.exprs:
        if isinstance(op, ConstStr):
            out.append({"const": op.text})
        else:
            out.append({"extract": [op.start, op.end]})
    return out


def plan_from_json(data: Iterable) -> TransformationPlan:
    exprs: list = []
    for item in data:
        if "const" in item:
            exprs.append(ConstStr(item["const"]))
        elif "extract" in item:
            start, end = item["extract"]
            exprs.append(Extract(start, end))
        else:
            raise ValueError(f"unknown plan expression: {item!r}")
    return TransformationPlan(tuple(exprs))


def program_to_json(program: Program, target: "Pattern | None" = None) -> dict:
    doc = {
        "branches": [
            {"match": render_pattern(pred.pattern), "plan": plan_to_json(plan)}
            for pred, plan in program.branches
        ]
    }
    if target is not None:
        doc["target"] = render_pattern(target)
    return doc


def program_from_json(data: dict) -> tuple[Program, "Pattern | None"]:
    branches = tuple(
        (MatchPredicate(parse_pattern(b["match"])), plan_from_json(b["plan"]))
        for b in data["branches"]
    )
    target = parse_pattern(data["target"]) if data.get("target") else None
    return Program(branches), target


def program_dumps(program: Program, target: "Pattern | None" = None) -> str:
    return json.dumps(program_to_json(program, target), indent=2)
