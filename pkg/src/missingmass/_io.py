"""CSV helpers: fixed column order and lossless float formatting."""
import csv
import io
import json
import os
import tempfile

import numpy as np

FLOAT_FORMAT = "%.17g"


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return FLOAT_FORMAT % float(value)
    return str(value)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def render_csv(header, rows, comment=None):
    """Render rows to a CSV string; ``comment`` becomes a leading ``#`` line."""
    buf = io.StringIO()
    if comment is not None:
        buf.write(f"# {comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file so no partial file is left."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
