"""Reading and writing the plain-text votes file format.

A votes file is UTF-8 text with one positive decimal vote count per line.
Blank lines and lines starting with ``#`` are ignored, so generators can
record their parameters as a comment header.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import as_votes_array


def read_votes(path) -> np.ndarray:
    """Parse a votes file into a validated float array."""
    text = Path(path).read_text(encoding="utf-8")
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            values.append(float(stripped))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: not a decimal vote count: "
                             f"{stripped!r}") from exc
    if not values:
        raise ValueError(f"{path}: no vote counts found")
    return as_votes_array(values)


def write_votes(path, votes: Sequence[float],
                header: Iterable[str] = ()) -> None:
    """Write votes one per line, preceded by ``header`` comment lines."""
    arr = as_votes_array(votes)
    lines = [f"# {entry}" for entry in header]
    lines.extend(repr(float(v)) for v in arr)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
