import csv
import enum
import io
import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from ..models import OutputFormat
from ..schemas import Table


class TableSerializer:
    @staticmethod
    def plain(value: Any) -> Any:
        """Reduce numpy scalars and enums to the builtin value that gets written."""
        if isinstance(value, enum.Enum):
            return value.value
        if hasattr(value, "item"):
            return value.item()
        return value

    @staticmethod
    def format_cell(value: Any) -> str:
        """CSV text of a cell; floats use the shortest repr that round-trips."""
        value = TableSerializer.plain(value)
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, float):
            return repr(value)
        return str(value)

    @staticmethod
    def to_csv(table: Table, version: Optional[str] = None) -> str:
        buffer = io.StringIO()
        if version:
            buffer.write(f"# mlsemigroup {version}\n")
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([TableSerializer.format_cell(value) for value in row])
        # summary values trail the rows as comments, so row readers skip them
        for key, value in table.summary.items():
            buffer.write(f"# {key}={TableSerializer.format_cell(value)}\n")
        return buffer.getvalue()

    @staticmethod
    def to_json(table: Table, version: Optional[str] = None) -> str:
        document: Dict[str, Any] = {}
        if version:
            document["version"] = version
        document["columns"] = list(table.columns)
        rows: List[Dict[str, Any]] = [
            {name: TableSerializer.plain(value) for name, value in zip(table.columns, row)}
            for row in table.rows
        ]
        document["rows"] = rows
        for key, value in table.summary.items():
            document[key] = TableSerializer.plain(value)
        # NaN and infinities are written as the bare tokens Python's json reads back
        return json.dumps(document, indent=2, allow_nan=True) + "\n"

    @staticmethod
    def render(table: Table, output_format: OutputFormat, version: Optional[str] = None) -> str:
        if output_format == OutputFormat.JSON:
            return TableSerializer.to_json(table, version)
        return TableSerializer.to_csv(table, version)

    @staticmethod
    def write(text: str, output_path: Optional[Path], stream) -> None:
        if output_path is None:
            stream.write(text)
        else:
            Path(output_path).write_text(text, encoding="utf-8")
