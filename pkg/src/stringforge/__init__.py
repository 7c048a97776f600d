"""Pattern profiling and program synthesis for messy string columns.

Profile a column into a hierarchy of syntactic patterns, label the shape you
want as a target pattern, and synthesize a branching transformation program
that rewrites the non-conforming rows — previewable, repairable, exportable
as regexp-replace steps, and runnable from the CLI or over HTTP.
"""

__version__ = "0.1.0"

from .patterns import (
    PLUS,
    Pattern,
    PatternSyntaxError,
    Token,
    TokenClass,
    covers,
    lit,
    parse_pattern,
    pattern_matches,
    render_pattern,
    render_regex,
)
from .profiler import (
    PatternHierarchy,
    build_hierarchy,
    hierarchy_to_json,
    tokenize,
)
from .programs import (
    ConstStr,
    Extract,
    MatchPredicate,
    Program,
    TransformationPlan,
    apply_row,
    eval_program,
    explain,
    program_dumps,
    program_from_json,
    program_to_json,
)
from .synthesis import (
    RankedPlans,
    SynthesisResult,
    description_length,
    enumerate_plans,
    find_token_alignment,
    repair,
    result_to_json,
    synthesize,
    validate,
)

__all__ = [
    "PLUS",
    "Pattern",
    "PatternSyntaxError",
    "Token",
    "TokenClass",
    "covers",
    "lit",
    "parse_pattern",
    "pattern_matches",
    "render_pattern",
    "render_regex",
    "PatternHierarchy",
    "build_hierarchy",
    "hierarchy_to_json",
    "tokenize",
    "ConstStr",
    "Extract",
    "MatchPredicate",
    "Program",
    "TransformationPlan",
    "apply_row",
    "eval_program",
    "explain",
    "program_dumps",
    "program_from_json",
    "program_to_json",
    "RankedPlans",
    "SynthesisResult",
    "description_length",
    "enumerate_plans",
    "find_token_alignment",
    "repair",
    "result_to_json",
    "synthesize",
    "validate",
    "__version__",
]
