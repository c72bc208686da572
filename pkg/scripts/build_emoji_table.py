"""Regenerate ``src/slicecheck/data/emoji.tsv`` from the ``emoji`` package.

Only needed when refreshing the table; the package itself never imports
``emoji`` at runtime.

    pip install emoji && python scripts/build_emoji_table.py
"""

from __future__ import annotations

import re
import unicodedata
from pathlib import Path

import emoji

OUT = Path(__file__).resolve().parents[1] / "src" / "slicecheck" / "data" / "emoji.tsv"


def shortname(name: str) -> str:
    name = name.strip(":")
    name = unicodedata.normalize("NFKD", name).encode("ascii", "ignore").decode()
    name = name.replace("_", "-").replace(" ", "-")
    name = re.sub(r"[^A-Za-z0-9-]", "", name)
    name = re.sub(r"-{2,}", "-", name).strip("-")
    return name.lower()


def main() -> None:
    rows = {}
    for seq, data in emoji.EMOJI_DATA.items():
        name = shortname(data["en"])
        if name:
            rows[seq] = name
    lines = [
        " ".join(f"{ord(ch):04X}" for ch in seq) + "\t" + name
        for seq, name in sorted(rows.items(), key=lambda kv: [ord(c) for c in kv[0]])
    ]
    OUT.write_text(
        f"# emoji codepoint sequence -> shortname (emoji {emoji.__version__})\n"
        + "\n".join(lines)
        + "\n",
        encoding="utf-8",
    )
    print(f"wrote {len(lines)} entries to {OUT}")


if __name__ == "__main__":
    main()
