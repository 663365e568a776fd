#!/usr/bin/env python3
"""
Generate sample input files for the corrcalc CLI
"""
import sys
import os
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from pathlib import Path
from typing import Dict, Optional

from services.reporting import dumps
from services.session_service import emit_table, session_from_data

TREFOIL_PD = "PD[X[1,5,2,4], X[3,1,4,6], X[5,3,6,2]]"

TRICOLOR = {"degree": 3, "images": {"g1": "(1 2)", "g2": "(2 3)", "g3": "(1 3)"}}

UNKNOT = {"label": "O", "generators": 1, "relators": [], "components": {"g1": "K1"}}

CYCLIC_SESSION = {
    "cyclic": [1, 2, 3, 4, 5, 6],
    "requests": [
        {"left": "M(2)", "right": "M(3)"},
        {"left": "M(3)", "right": "M(2)"},
        {"left": "M(2)", "right": "M(2)"},
    ],
}

DECLARATION = {
    "kind": "cobordism",
    "equiv": [["M(2)∘M(3)#1", "M(6)"], ["M(3)∘M(2)#1", "M(6)"]],
}

CELLS = {
    "cells": {
        "W1": {"src": "M(6)", "tgt": "M(2)∘M(3)#1", "deg": 6, "inv": {"chi": 3.0}},
        "W2": {"src": "M(2)∘M(3)#1", "tgt": "M(3)∘M(2)#1", "deg": 6, "inv": {"chi": 5.0}},
        "W3": {"src": "M(6)", "tgt": "M(3)∘M(2)#1", "deg": 6, "inv": {"chi": 7.0}},
    },
    "vertical": {"W1|W2": "W3"},
    "horizontal": {},
}

BOUNDARY = {"chi": {"M(6)": 0.0, "M(2)∘M(3)#1": 1.0, "M(3)∘M(2)#1": 2.0}}


def write(path: Path, content: str):
    path.write_text(content + "\n", encoding="utf-8")
    print(f"✓ {path}")


def cyclic_table() -> Dict:
    return emit_table(session_from_data(CYCLIC_SESSION))['table'].to_json()


def generate(output_dir: Optional[Path] = None) -> Path:
    """Write every sample file into output_dir"""
    output_dir = Path(output_dir or Path(__file__).resolve().parent.parent / "sample_data")
    output_dir.mkdir(parents=True, exist_ok=True)

    write(output_dir / "trefoil.pd", TREFOIL_PD)
    write(output_dir / "tricolor.json", dumps(TRICOLOR))
    write(output_dir / "unknot.json", dumps(UNKNOT))
    write(output_dir / "cyclic_session.json", dumps(CYCLIC_SESSION))
    write(output_dir / "cyclic_table.json", dumps(cyclic_table()))
    write(output_dir / "declaration.json", dumps(DECLARATION))
    write(output_dir / "cells.json", dumps(CELLS))
    write(output_dir / "boundary.json", dumps(BOUNDARY))
    return output_dir


if __name__ == "__main__":
    print("🚀 Generating corrcalc sample data...")
    target = generate(Path(sys.argv[1]) if len(sys.argv) > 1 else None)
    print(f"\n✅ Sample data written to {target}")
