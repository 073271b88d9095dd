"""Small deterministic file-writing helpers shared by exporters and the CLI."""

from __future__ import annotations

import os
import tempfile


def atomic_write_text(path, text):
    """Write text to path atomically (temp file + rename, same directory)."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def format_float(x):
    """Shortest round-trip decimal form; stable across runs."""
    return repr(float(x))
