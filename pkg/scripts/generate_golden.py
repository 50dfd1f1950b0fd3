#!/usr/bin/env python3
"""Regenerate the golden gallery documents under tests/golden/.

Run after any intentional rendering change, then review the diff:

    python scripts/generate_golden.py
"""

from pathlib import Path

from plantchart.svg import design_space_gallery

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main() -> None:
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for style, document in design_space_gallery():
        path = GOLDEN_DIR / f"{style.label()}.svg"
        path.write_text(document, encoding="utf-8")
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
