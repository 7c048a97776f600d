"""Record service responses as JSON fixtures for the frontend tests.

Run from the repository root after installing the Python package:

    python3 frontend/scripts/capture_fixtures.py

The frontend test suite replays these documents through a stub fetch();
regenerate them whenever the wire format changes.
"""
import json
import random
from pathlib import Path

from fastapi.testclient import TestClient

from stringforge.service import create_app
from stringforge.sessions import SessionStore

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

DATE_ROWS = ["25/12/2017", "31/01/2016", "07/04/1999", "14/09/2021", "28/02/2003"]
DATE_TARGET = "<D>2'-'<D>2'-'<D>4"
DATE_SOURCE = "<D>2'/'<D>2'/'<D>4"


def phone_rows(per_format: int = 2, seed: int = 8388) -> list:
    rng = random.Random(seed)
    formats = [
        lambda d: f"({d[0:3]}) {d[3:6]}-{d[6:10]}",
        lambda d: f"({d[0:3]}){d[3:6]}-{d[6:10]}",
        lambda d: f"{d[0:3]}-{d[3:6]}-{d[6:10]}",
        lambda d: f"{d[0:3]}.{d[3:6]}.{d[6:10]}",
    ]
    rows = []
    for fmt in formats:
        for _ in range(per_format):
            rows.append(fmt("".join(rng.choice("0123456789") for _ in range(10))))
    rng.shuffle(rows)
    return rows


def dump(name: str, doc: dict) -> None:
    path = FIXTURES / name
    path.write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {path}")


def main() -> None:
    client = TestClient(create_app(SessionStore()))

    resp = client.post("/sessions", json={"rows": DATE_ROWS, "column": "when"})
    resp.raise_for_status()
    hierarchy = resp.json()
    sid = hierarchy["session_id"]
    dump("dates_hierarchy.json", hierarchy)

    resp = client.post(f"/sessions/{sid}/target", json={"pattern": DATE_TARGET})
    resp.raise_for_status()
    dump("dates_program_default.json", resp.json())
    dump("dates_preview_default.json", client.get(f"/sessions/{sid}/preview").json())

    resp = client.post(
        f"/sessions/{sid}/repair", json={"source": DATE_SOURCE, "index": 2}
    )
    resp.raise_for_status()
    dump("dates_program_repaired.json", resp.json())
    dump("dates_preview_repaired.json", client.get(f"/sessions/{sid}/preview").json())

    resp = client.post("/sessions", json={"rows": phone_rows(), "column": "phone"})
    resp.raise_for_status()
    dump("phone_hierarchy.json", resp.json())


if __name__ == "__main__":
    main()
