"""End-to-end acceptance suite.

One test per headline guarantee: the golden examples (email shape, medical
codes, personal names, phone numbers), the ranking and deduplication
behavior, the randomized soundness/completeness/fidelity suites backed by
the reference implementations in ``oracle.py``, and byte-for-byte parity
between the CLI and the HTTP service.
"""
import json
import random
import time
from pathlib import Path

import pytest

from stringforge.cli import main as cli_main
from stringforge.patterns import (
    BASE_CLASSES,
    PLUS,
    Pattern,
    Token,
    TokenClass,
    lit,
    parse_pattern,
    pattern_matches,
    render_pattern,
)
from stringforge.profiler import build_hierarchy, get_parent, tokenize
from stringforge.programs import (
    ConstStr,
    Extract,
    TransformationPlan,
    apply_row,
    eval_plan,
    plan_from_json,
    program_from_json,
)
from stringforge.synthesis import (
    description_length,
    enumerate_plans,
    find_token_alignment,
    plans_equivalent,
    result_to_json,
    synthesize,
    validate,
)

from corpora import (
    DATE_ROWS,
    DATE_TARGET,
    MEDICAL_EXPECTED,
    MEDICAL_ROWS,
    MEDICAL_TARGET,
    NAMES_EXPECTED,
    NAMES_ROWS,
    PHONE_SCRIPT_LINE_1,
    PHONE_SCRIPT_LINE_2,
    PHONE_TARGET,
    phone_rows,
)
from oracle import (
    alignment_friendly,
    brute_force_plans,
    plan_units,
    realizations,
    ref_apply_script,
    ref_matches,
)

DATA_DIR = Path(__file__).parent / "data"


def test_tokenization_golden_email_under_1ms():
    ts = tokenize("Bob123@gmail.com")
    assert ts.tokens == (
        Token(TokenClass.UPPER, 1),
        Token(TokenClass.LOWER, 2),
        Token(TokenClass.DIGIT, 3),
        lit("@"),
        Token(TokenClass.LOWER, 5),
        lit("."),
        Token(TokenClass.LOWER, 3),
    )
    start = time.perf_counter()
    for _ in range(2000):
        tokenize("Bob123@gmail.com")
    per_call = (time.perf_counter() - start) / 2000
    assert per_call < 0.001


def test_hierarchy_generalization_chain_golden():
    leaf = tokenize("Bob123@gmail.com").pattern
    p1 = get_parent(leaf, 1)
    p2 = get_parent(p1, 2)
    p3 = get_parent(p2, 3)
    assert render_pattern(leaf) == "<U><L>2<D>3'@'<L>5'.'<L>3"
    assert render_pattern(p1) == "<U><L>+<D>+'@'<L>+'.'<L>+"
    assert render_pattern(p2) == "<A>+<D>+'@'<A>+'.'<A>+"
    assert render_pattern(p3) == "<AN>+'@'<AN>+'.'<AN>+"

    h = build_hierarchy(["Bob123@gmail.com"])
    chain = [render_pattern(node.pattern) for node in h.walk()]
    assert chain == [render_pattern(p) for p in (p3, p2, p1, leaf)]


def test_validation_goldens():
    target = parse_pattern(MEDICAL_TARGET)
    assert validate(parse_pattern("'['<U>3'-'<D>5"), target) is True
    assert validate(parse_pattern("'['<U>3'-'"), target) is False


def test_medical_codes_end_to_end(store):
    created = store.create(MEDICAL_ROWS, "column1")
    hierarchy = store.hierarchy_json(created.session_id)

    cluster_id = None

    def walk(node):
        nonlocal cluster_id
        if node["pattern"] == MEDICAL_TARGET:
            cluster_id = node["id"]
        for child in node["children"]:
            walk(child)

    for root in hierarchy["roots"]:
        walk(root)
    assert cluster_id is not None, "target cluster missing from the hierarchy"

    doc = store.set_target(created.session_id, cluster_id=cluster_id)
    target = parse_pattern(MEDICAL_TARGET)

    # The default (no-repair) program must already produce the golden column.
    _, body = store.export(created.session_id, "program-json")
    program, loaded_target = program_from_json(json.loads(body))
    assert loaded_target == target
    outputs = [apply_row(program, row, target)[0] for row in MEDICAL_ROWS]
    assert outputs == MEDICAL_EXPECTED

    # Every default plan is cross-checked against the brute-force oracle:
    # it must be one of the semantically valid plans, and minimal-cost.
    for branch in doc["branches"]:
        source = parse_pattern(branch["source"])
        oracle = brute_force_plans(source, target)
        assert oracle, f"oracle found no plan for {branch['source']}"
        default = plan_from_json(branch["default"])
        assert plan_units(default, source) in {plan_units(p, source) for p in oracle}
        oracle_best = min(description_length(p, source, target) for p in oracle)
        assert description_length(default, source, target) == oracle_best


def test_names_program_golden():
    doc = json.loads((DATA_DIR / "names_program.json").read_text(encoding="utf-8"))
    program, target = program_from_json(doc)
    outputs = [apply_row(program, row, target)[0] for row in NAMES_ROWS]
    assert outputs == NAMES_EXPECTED


def test_phone_walkthrough_script_and_single_cluster():
    rows = phone_rows()
    assert len(rows) == 10_000
    target = parse_pattern(PHONE_TARGET)
    hierarchy = build_hierarchy(rows)

    start = time.perf_counter()
    result = synthesize(hierarchy, target, k=5)
    outputs = [apply_row(result.program, row, target)[0] for row in rows]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"synthesize+apply took {elapsed:.3f}s"

    doc = result_to_json(result, column="column1", rows=rows)
    assert doc["script"][:2] == [PHONE_SCRIPT_LINE_1, PHONE_SCRIPT_LINE_2]
    assert doc["unmatched"] == []

    assert all(ref_matches(target, out) for out in outputs)
    post = doc["post_transform"]
    assert post["status_counts"] == {
        "transformed": 7500,
        "already_conforming": 2500,
        "unmatched": 0,
    }
    assert len(post["roots"]) == 1
    node = post["roots"][0]
    while node["children"]:
        assert len(node["children"]) == 1
        node = node["children"][0]
    assert node["pattern"] == PHONE_TARGET
    assert node["count"] == 10_000


def test_description_length_prefers_single_wide_copy():
    five = parse_pattern("<D>2'/'<D>2'/'<D>4")
    wide = TransformationPlan((Extract(1, 5),))
    stitched = TransformationPlan((Extract(1, 2), ConstStr("/"), Extract(4, 5)))
    assert description_length(wide, five) < description_length(stitched, five)

    three = parse_pattern("<D>2'/'<D>4")
    wide3 = TransformationPlan((Extract(1, 3),))
    stitched3 = TransformationPlan((Extract(1, 1), ConstStr("/"), Extract(3, 3)))
    assert description_length(wide3, three) < description_length(stitched3, three)


def test_equivalent_plans_collapse_to_one_ranked_entry():
    source = parse_pattern("<D>2'/'<D>4")
    wide = TransformationPlan((Extract(1, 3),))
    stitched = TransformationPlan((Extract(1, 1), ConstStr("/"), Extract(3, 3)))
    assert plans_equivalent(wide, stitched, source)

    dag = find_token_alignment(source, source)
    ranked = enumerate_plans(dag, source, source, k=50)
    assert len(ranked.plans) == 1
    assert ranked.plans[0][0] == wide


def _random_source(rng: random.Random) -> Pattern:
    tokens = []
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.3:
            tokens.append(lit(rng.choice(["-", ".", "/", "ab", "X"])))
        else:
            cls = rng.choice(BASE_CLASSES)
            reps = PLUS if rng.random() < 0.3 else rng.randint(1, 3)
            tokens.append(Token(cls, reps))
    return Pattern(tuple(tokens))


def _derived_target(rng: random.Random, source: Pattern) -> Pattern:
    order = list(range(len(source.tokens)))
    rng.shuffle(order)
    tokens = []
    for i in order[: rng.randint(1, len(order))]:
        if rng.random() < 0.4:
            tokens.append(lit(rng.choice(["-", " ", ":"])))
        tok = source.tokens[i]
        if tok.is_literal:
            tokens.append(tok)
        else:
            reps = PLUS if (tok.is_plus or rng.random() < 0.5) else tok.reps
            tokens.append(Token(tok.cls, reps))
    return Pattern(tuple(tokens))


def test_soundness_on_200_random_triples():
    start = time.perf_counter()
    rng = random.Random(4121)
    triples = 0
    while triples < 200:
        source = _random_source(rng)
        target = _derived_target(rng, source)
        ranked = enumerate_plans(
            find_token_alignment(source, target), source, target, k=3
        )
        for plan, _ in ranked.plans:
            for raw in realizations(source, cap=30)[:3]:
                out = eval_plan(plan, tokenize(raw), source)
                assert ref_matches(target, out)
                assert pattern_matches(target, out)
                triples += 1
    assert triples >= 200
    assert time.perf_counter() - start < 30


def _rng_small_pattern(rng: random.Random) -> Pattern:
    tokens = []
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.35:
            text = "".join(rng.choice("a0-.") for _ in range(rng.randint(1, 2)))
            tokens.append(lit(text))
        else:
            cls = rng.choice(BASE_CLASSES)
            reps = PLUS if rng.random() < 0.25 else rng.randint(1, 3)
            tokens.append(Token(cls, reps))
    return Pattern(tuple(tokens))


def test_completeness_against_brute_force_oracle():
    start = time.perf_counter()
    rng = random.Random(20717)
    exact_matches = 0
    for _ in range(150):
        source = _rng_small_pattern(rng)
        target = _rng_small_pattern(rng)
        ranked = enumerate_plans(
            find_token_alignment(source, target), source, target, k=2000
        )
        assert not ranked.truncated
        engine = {plan_units(p, source) for p, _ in ranked.plans}
        oracle = {plan_units(p, source) for p in brute_force_plans(source, target)}
        # The engine never invents a plan the oracle rejects...
        assert engine <= oracle
        # ...and on instances free of cross-class confusions it finds them all.
        if alignment_friendly(source, target):
            assert engine == oracle
            exact_matches += 1
    assert exact_matches >= 25
    assert time.perf_counter() - start < 30


def test_explanation_fidelity_on_200_rows():
    start = time.perf_counter()
    rng = random.Random(2093)
    rows = phone_rows(per_format=40, seed=777)
    alphabet = "0123456789ab-() ."
    while len(rows) < 200:
        rows.append("".join(rng.choice(alphabet) for _ in range(rng.randint(1, 14))))
    rng.shuffle(rows)
    assert len(rows) == 200

    target = parse_pattern(PHONE_TARGET)
    result = synthesize(build_hierarchy(rows), target, k=5)
    script = result_to_json(result, column="column1")["script"]
    for row in rows:
        out, status = apply_row(result.program, row, target)
        replay = ref_apply_script(script, row)
        if status == "transformed":
            assert replay == out
        else:
            assert replay is None
            assert out == row
    assert time.perf_counter() - start < 30


def test_partition_invariants_on_1000_random_strings():
    start = time.perf_counter()
    rng = random.Random(60035)
    alphabet = "aA0 zZ9-_.é@'\\\t"
    for _ in range(1000):
        s = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 20)))
        ts = tokenize(s)
        cursor = 0
        for tok, (a, b) in zip(ts.tokens, ts.spans):
            assert a == cursor and b > a
            cursor = b
            piece = s[a:b]
            if tok.is_literal:
                assert tok.text == piece and len(piece) == 1
                assert not (piece.isascii() and piece.isalnum())
            else:
                assert tok.reps == len(piece)
        assert cursor == len(s)
        # maximal runs: no two adjacent tokens share a base class
        for left, right in zip(ts.tokens, ts.tokens[1:]):
            if not left.is_literal:
                assert left.cls is not right.cls
        if s:
            assert ref_matches(ts.pattern, s)
    assert time.perf_counter() - start < 30


def _run_cli(capsys, argv):
    try:
        code = cli_main(argv)
    except SystemExit as exc:  # argparse usage failures
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "rows,target_text",
    [
        (phone_rows(per_format=50), PHONE_TARGET),
        (MEDICAL_ROWS, MEDICAL_TARGET),
        (DATE_ROWS, DATE_TARGET),
    ],
    ids=["phone", "medical", "dates"],
)
def test_cli_and_service_parity(rows, target_text, tmp_path, capsys, client):
    data_file = tmp_path / "rows.txt"
    data_file.write_text("".join(r + "\n" for r in rows), encoding="utf-8")
    program_file = tmp_path / "program.json"

    code, cli_script, _ = _run_cli(
        capsys,
        [
            "synth",
            "--input",
            str(data_file),
            "--target",
            target_text,
            "--out",
            str(program_file),
        ],
    )
    assert code == 0

    resp = client.post("/sessions", json={"rows": rows})
    assert resp.status_code == 201
    sid = resp.json()["session_id"]
    assert client.post(f"/sessions/{sid}/target", json={"pattern": target_text}).status_code == 200

    exported_script = client.get(f"/sessions/{sid}/export", params={"format": "script"})
    assert cli_script == exported_script.text

    exported_program = client.get(
        f"/sessions/{sid}/export", params={"format": "program-json"}
    )
    assert program_file.read_text(encoding="utf-8") == exported_program.text

    code, cli_csv, _ = _run_cli(
        capsys,
        [
            "apply",
            "--input",
            str(data_file),
            "--program",
            str(program_file),
            "--with-status",
        ],
    )
    assert code == 0
    exported_rows = client.get(
        f"/sessions/{sid}/export", params={"format": "transformed-data"}
    )
    assert cli_csv == exported_rows.text
