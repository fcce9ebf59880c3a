"""Reading numeric matrices from delimited text files."""
import re

import numpy as np

from .errors import InvalidInputError

_SPLIT = re.compile(r"[,\s]+")


def load_matrix(path):
    """Parse a comma- or whitespace-delimited numeric matrix.

    Blank lines and lines starting with ``#`` are skipped. Errors name the
    file and the 1-based line number.
    """
    rows = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            tokens = [t for t in _SPLIT.split(text) if t]
            try:
                values = [float(t) for t in tokens]
            except ValueError:
                bad = next(t for t in tokens if not _is_float(t))
                raise InvalidInputError(f"{path}:{lineno}: non-numeric token {bad!r}") from None
            if not all(np.isfinite(values)):
                raise InvalidInputError(f"{path}:{lineno}: non-finite value")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise InvalidInputError(
                    f"{path}:{lineno}: expected {width} columns, found {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise InvalidInputError(f"{path}: no data rows")
    return np.array(rows, dtype=np.float64)


def _is_float(token):
    try:
        float(token)
    except ValueError:
        return False
    return True


def split_groups(matrix, group_col, path="<data>"):
    """Split rows by the integer label in column ``group_col`` (0-based).

    Returns ``(labels, datasets)`` ordered by label, the label column removed.
    """
    if not -matrix.shape[1] <= group_col < matrix.shape[1]:
        raise InvalidInputError(f"{path}: group column {group_col} out of range")
    labels = matrix[:, group_col]
    if not np.all(labels == np.round(labels)):
        row = int(np.flatnonzero(labels != np.round(labels))[0])
        raise InvalidInputError(f"{path}: data row {row + 1} has a non-integer group label")
    values = np.delete(matrix, group_col, axis=1)
    if values.shape[1] == 0:
        raise InvalidInputError(f"{path}: no data columns besides the group column")
    ids = np.unique(labels).astype(int)
    return [int(i) for i in ids], [values[labels == i] for i in ids]
