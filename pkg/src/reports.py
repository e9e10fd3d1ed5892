"""
Reports Module
Schema-stable experiment reports rendered as CSV or JSON
"""

import csv
import io
import time
from contextlib import contextmanager
from typing import Any, Dict, Iterator, List, Union

from pydantic import BaseModel, Field

Cell = Union[bool, int, str, None]


class ExperimentReport(BaseModel):
    """One experiment run: parameters, a table of rows, and completeness"""

    experiment: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    columns: List[str]
    rows: List[List[Cell]] = Field(default_factory=list)
    complete: bool = True
    duration_seconds: float = 0.0

    def add_row(self, *values: Cell):
        if len(values) != len(self.columns):
            raise ValueError(f"row has {len(values)} values for {len(self.columns)} columns")
        self.rows.append(list(values))

    def to_csv(self) -> str:
        """Table as CSV; the duration is left out so output is reproducible"""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow(["" if value is None else _render(value) for value in row])
        return buffer.getvalue()

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def data(self) -> Dict[str, Any]:
        """Everything except the duration"""
        return self.model_dump(exclude={"duration_seconds"})

    @contextmanager
    def timed(self) -> Iterator["ExperimentReport"]:
        start = time.perf_counter()
        try:
            yield self
        finally:
            self.duration_seconds = round(time.perf_counter() - start, 6)


def _render(value: Cell) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)
