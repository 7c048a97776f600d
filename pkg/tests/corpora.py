"""Fixed input corpora and hand-checked expected outputs shared across tests."""

from __future__ import annotations

import random

# ---------------------------------------------------------------------------
# phone numbers: four familiar US formats, one conforming
# ---------------------------------------------------------------------------

PHONE_TARGET = "'('<D>3')'' '<D>3'-'<D>4"

PHONE_SCRIPT_LINE_1 = (
    "Replace '/^\\(({digit}{3})\\)({digit}{3})\\-({digit}{4})$/' "
    "in column1 with '($1) $2-$3'"
)
PHONE_SCRIPT_LINE_2 = (
    "Replace '/^({digit}{3})\\-({digit}{3})\\-({digit}{4})$/' "
    "in column1 with '($1) $2-$3'"
)


def phone_rows(per_format: int = 2500, seed: int = 8388) -> list[str]:
    """Equal-sized clusters in each of the four formats, shuffled."""
    rng = random.Random(seed)

    def d(n: int) -> str:
        return "".join(str(rng.randrange(10)) for _ in range(n))

    formats = [
        lambda: f"({d(3)}) {d(3)}-{d(4)}",
        lambda: f"({d(3)}){d(3)}-{d(4)}",
        lambda: f"{d(3)}-{d(3)}-{d(4)}",
        lambda: f"{d(3)}.{d(3)}.{d(4)}",
    ]
    rows = [fmt() for fmt in formats for _ in range(per_format)]
    rng.shuffle(rows)
    return rows


# ---------------------------------------------------------------------------
# medical procedure codes
# ---------------------------------------------------------------------------

MEDICAL_ROWS = ["CPT-00350", "[CPT-00340", "[CPT-11536]", "CPT115"]
MEDICAL_EXPECTED = ["[CPT-00350]", "[CPT-00340]", "[CPT-11536]", "[CPT-115]"]
MEDICAL_TARGET = "'['<U>+'-'<D>+']'"


# ---------------------------------------------------------------------------
# person names ("Lastname, F." normalization)
# ---------------------------------------------------------------------------

NAMES_ROWS = [
    "Dr. Eran Yahav",
    "Fisher, K.",
    "Bill Gates, Sr.",
    "Oege de Moor",
]
NAMES_EXPECTED = [
    "Yahav, E.",
    "Fisher, K.",
    "Gates, B.",
    "Moor, O.",
]


# ---------------------------------------------------------------------------
# dates with swapped day/month fields
# ---------------------------------------------------------------------------

DATE_ROWS = ["25/12/2017", "31/01/2016", "07/04/1999", "14/09/2021", "28/02/2003"]
DATE_TARGET = "<D>2'-'<D>2'-'<D>4"
DATE_EXPECTED_DEFAULT = ["25-12-2017", "31-01-2016", "07-04-1999", "14-09-2021", "28-02-2003"]
DATE_EXPECTED_SWAPPED = ["12-25-2017", "01-31-2016", "04-07-1999", "09-14-2021", "02-28-2003"]
