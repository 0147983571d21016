import csv
import io
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Sequence

from models.errors import NonFinite
from utils.logger import logger


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render(rows: List[Dict[str, Any]], columns: Sequence[str], fmt: str, meta: Dict[str, Any]) -> str:
    """Render rows as a JSON document {"meta", "rows"} or as CSV with a header line."""
    if fmt == "json":
        try:
            payload = {"meta": meta, "rows": [{column: row.get(column) for column in columns} for row in rows]}
            return json.dumps(payload, indent=2, allow_nan=False) + "\n"
        except ValueError as e:
            raise NonFinite(f"refusing to serialise a non-finite value: {e}") from e
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])
    return buffer.getvalue()


def write_atomic(text: str, path: Path) -> None:
    """Write text to path via a sibling temp file and rename, so readers never see a partial file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    handle, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(handle, "w", encoding="utf-8") as stream:
            stream.write(text)
        os.replace(temp_name, path)
    except OSError:
        Path(temp_name).unlink(missing_ok=True)
        raise
    logger.info(f"wrote {path}")
