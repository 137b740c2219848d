import json
import sys
from pathlib import Path
from typing import Iterable, List, Optional

import pandas as pd

SCHEMA_VERSION = "densicohom/1"

scan_columns = ['lambda', 'delta', 'case', 'rank_lambda', 'dim_h1', 'dim_h1_relative',
                'paper_lower', 'paper_upper', 'bounds_satisfied']


def dumps_document(payload: dict) -> str:
    """
    Canonical JSON text of a result: the schema tag first, two-space indentation, keys in
    insertion order. Loading and dumping the text again gives the same bytes.
    """
    document = {'schema': SCHEMA_VERSION}
    document.update(payload)
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


def scan_row(report_json: dict) -> dict:
    """Flattens a serialized cohomology report into one scan table row."""
    case = report_json['case']
    return {
        'lambda': report_json['params']['lambda'],
        'delta': report_json['params']['delta'],
        'case': 'NonIntegerShift' if case['tag'] == 'NonIntegerShift'
        else ('resonant' if case['resonant'] else 'generic'),
        'rank_lambda': report_json['rank_lambda'],
        'dim_h1': report_json['dim_h1'],
        'dim_h1_relative': report_json['dim_h1_relative'],
        'paper_lower': report_json['paper_lower'],
        'paper_upper': report_json['paper_upper'],
        'bounds_satisfied': report_json['bounds_satisfied'],
    }


def table_csv(rows: List[dict], columns: Optional[List[str]] = None) -> str:
    """
    Rows of plain values as a CSV table. List cells are joined by commas, pandas quotes them.
    """
    frame = pd.DataFrame(rows, columns=columns)
    for column in frame.columns:
        frame[column] = frame[column].map(
            lambda value: ",".join(str(v) for v in value) if isinstance(value, list) else value)
    return frame.to_csv(index=False)


def rows_to_csv(rows: List[dict]) -> str:
    """Scan rows as a CSV table with a fixed column order."""
    return table_csv(rows, scan_columns)


def rows_to_json_lines(rows: Iterable[dict]) -> str:
    """One compact JSON object per scan row, each carrying the schema tag."""
    lines = []
    for row in rows:
        document = {'schema': SCHEMA_VERSION}
        document.update(row)
        lines.append(json.dumps(document, ensure_ascii=False))
    return "".join(line + "\n" for line in lines)


class ReportWriter:
    """
    Writes command output to a file or to standard output.

    :param output_path: file to write, parent folders are created; standard output when None
    :type output_path: Path
    """

    def __init__(self, output_path: Optional[Path] = None):
        self.output_path = output_path

    def write(self, text: str):
        if self.output_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        self.output_path.parent.mkdir(parents=True, exist_ok=True)
        with self.output_path.open(mode='w') as file:
            file.write(text)

    def write_document(self, payload: dict):
        self.write(dumps_document(payload))

    def write_rows(self, rows: List[dict], output_format: str):
        """Writes scan rows as ``csv`` or as JSON lines."""
        if output_format == 'csv':
            self.write(rows_to_csv(rows))
        else:
            self.write(rows_to_json_lines(rows))

    def write_table(self, rows: List[dict]):
        self.write(table_csv(rows))
