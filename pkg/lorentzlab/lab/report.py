''' Serialization of check reports: a JSON-lines detail file and a CSV
summary.'''
from datetime import datetime, timezone
import logging

import pandas as pd

from ..util import format_number, stable_json, to_jsonable

logger = logging.getLogger(__name__)

SUMMARY_COLUMNS = ('check_id', 'params', 'lhs', 'rhs', 'margin', 'verdict')
FLOAT_FORMAT = '%.12g'


def summary_frame(reports):
    ''' One row per report with the summary columns; params as sorted JSON.'''
    rows = [{'check_id': report.check_id,
             'params': stable_json(report.params),
             'lhs': report.lhs,
             'rhs': report.rhs,
             'margin': report.margin,
             'verdict': report.verdict.value} for report in reports]
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))


def write_csv(reports, path):
    ''' Write the summary table to ``path``; '.' decimal separator, 12
    significant digits.'''
    frame = reports if isinstance(reports, pd.DataFrame) else summary_frame(reports)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.debug('wrote %d summary rows to %s', len(frame), path)
    return path


def jsonl_lines(reports, meta=None, timestamp=True):
    ''' The lines of the detail file: an optional meta record, then one
    sorted-key JSON object per report.'''
    lines = []
    if meta is not None or timestamp:
        header = {'meta': to_jsonable(meta or {})}
        if timestamp:
            header['timestamp'] = datetime.now(timezone.utc).isoformat(timespec='seconds')
        lines.append(stable_json(header))
    lines.extend(stable_json(report) for report in reports)
    return lines


def write_jsonl(reports, path, meta=None, timestamp=True):
    lines = jsonl_lines(reports, meta, timestamp)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        for line in lines:
            f.write(line + '\n')
    logger.debug('wrote %d report lines to %s', len(lines), path)
    return path


def format_pretty(reports):
    ''' Aligned plain-text table of the summary columns.'''
    header = ('verdict', 'check_id', 'margin', 'params')
    rows = [(report.verdict.value, report.check_id,
             format_number(report.margin, 6) if report.verdict.value != 'SKIP' else '-',
             stable_json(report.params)) for report in reports]
    widths = [max([len(header[i])] + [len(row[i]) for row in rows]) for i in range(3)]
    lines = ['  '.join(cell.ljust(width) for cell, width in zip(header[:3], widths)) + '  ' + header[3]]
    for row in rows:
        lines.append('  '.join(cell.ljust(width) for cell, width in zip(row[:3], widths)) + '  ' + row[3])
    return '\n'.join(lines)


def counts_line(counts):
    return ' '.join(f'{key}={counts[key]}' for key in ('PASS', 'FAIL', 'SKIP'))
