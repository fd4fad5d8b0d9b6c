"""
Report Export Agent
Render tables and check reports as pretty text, TSV or JSON
"""

import json
from typing import Dict, List, Sequence

import pandas as pd
from pydantic import BaseModel

from app.agents.validator import CoxeterValidator


class ReportExporter:
    """Format command results for the terminal and for machines"""

    RULE_WIDTH = 60

    def __init__(self, output_format: str = 'pretty'):
        is_valid, msg = CoxeterValidator.validate_output_format(output_format)
        if not is_valid:
            raise ValueError(msg)
        self.output_format = output_format

    @staticmethod
    def _records(rows: Sequence) -> List[Dict]:
        return [row.model_dump() if isinstance(row, BaseModel) else dict(row) for row in rows]

    def banner(self, title: str) -> str:
        rule = '=' * self.RULE_WIDTH
        return f"{rule}\n{title}\n{rule}"

    def table(self, rows: Sequence, title: str = '', columns: Dict[str, str] = None) -> str:
        """
        Render rows (pydantic models or dicts)

        Args:
            rows: Records with the same keys
            title: Banner title for the pretty format
            columns: Optional mapping field -> display header (pretty only)

        Returns:
            Rendered text
        """
        records = self._records(rows)
        if self.output_format == 'json':
            return json.dumps(records, indent=2, default=str)

        df = pd.DataFrame(records)
        if self.output_format == 'tsv':
            return df.to_csv(sep='\t', index=False).rstrip('\n')

        if columns:
            df = df[[c for c in columns if c in df.columns]].rename(columns=columns)
        body = df.to_string(index=False) if len(df) else '(no rows)'
        return f"{self.banner(title)}\n{body}" if title else body

    def hilbert_table(self, rows: Sequence, title: str) -> str:
        records = self._records(rows)
        if self.output_format != 'json' and all(r.get('quadratic') is None for r in records):
            records = [{'degree': r['degree'], 'dimension': r['dimension']} for r in records]
        text = self.table(records, title)
        if self.output_format == 'pretty':
            total = sum(r['dimension'] for r in records)
            text += f"\n{'-' * self.RULE_WIDTH}\nTotal: {total}"
        return text

    def schubert_table(self, rows: Sequence, title: str) -> str:
        return self.table(rows, title, columns={
            'element': 'Element', 'length': 'Length', 'polynomial': 'Schubert class'
        })

    def reports_table(self, reports: Sequence, title: str = 'Checks') -> str:
        """Check reports; json keeps every field so reports can be parsed back"""
        if self.output_format == 'json':
            return json.dumps(self._records(reports), indent=2, default=str)

        rows = []
        for r in self._records(reports):
            status = r['status'].upper()
            if r.get('expected_failure'):
                status += ' (expected non-relation)'
            rows.append({
                'check': r['check'],
                'group': r['group'],
                'params': ', '.join(f"{k}={v}" for k, v in sorted(r['params'].items())),
                'status': status,
                'elapsed_ms': r['elapsed_ms'],
                'witness': '' if r.get('witness') is None else json.dumps(r['witness'], default=str),
            })
        return self.table(rows, title)

    def summary(self, model: BaseModel, title: str) -> str:
        """One record rendered as key/value lines"""
        record = model.model_dump()
        if self.output_format == 'json':
            return json.dumps(record, indent=2, default=str)
        if self.output_format == 'tsv':
            return self.table([record])
        lines = [self.banner(title)]
        for key, value in record.items():
            if isinstance(value, list):
                value = ', '.join(str(v) for v in value)
            lines.append(f"{key.replace('_', ' ').title():<16}: {value}")
        return '\n'.join(lines)
