import json
import logging
import os

import numpy as np

logger = logging.getLogger(__name__)

RECORD_TYPES = ('init', 'event', 'query', 'summary')


def _to_builtin(value):
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


class Monitor(object):
    """
        Collect the records of one run (the run report) and write them as
        JSON lines, one record per line with sorted keys.

        Record types are `init` (tracker ready), `event` (one update),
        `query` (one answered query) and `summary` (aggregates, optional).
        Wall times are only kept when `record_time` is set, so two runs with
        the same seed produce byte-identical reports.
    """
    def __init__(self, out=None, record_time=False):
        self.out = out
        self.record_time = record_time
        self.records = []
        self._num_events = 0
        self._num_queries = 0
        self._totals = {'refreshed': 0, 'added': 0, 'removed': 0}
        self._seconds = {'init': 0.0, 'event': 0.0, 'query': 0.0}
        self._last = {}

    @classmethod
    def from_cfg(cls, cfg):
        out = cfg.report.out
        if out == '':
            out = os.path.join(cfg.outdir, 'report.jsonl')
        return cls(out, record_time=cfg.report.record_time)

    def add(self, record_type, seconds=None, **fields):
        if record_type not in RECORD_TYPES:
            raise ValueError(
                f'record type must be one of {RECORD_TYPES}, but got {record_type}'
            )
        record = dict(fields, type=record_type)
        if seconds is not None and record_type in self._seconds:
            self._seconds[record_type] += seconds
            if self.record_time:
                record['seconds'] = seconds
        if record_type == 'event':
            self._num_events += 1
            for key in self._totals:
                self._totals[key] += record.get(key, 0)
        elif record_type == 'query':
            self._num_queries += 1
        for key in ('M1', 'M2', 'cost'):
            if key in record:
                self._last[key] = record[key]
        self.records.append(record)
        return record

    def summarize(self, **fields):
        """
        Append the aggregate record of the run.
        """
        summary = dict(self._last)
        summary.update(num_events=self._num_events,
                       num_queries=self._num_queries,
                       **{f'total_{k}': v
                          for k, v in self._totals.items()})
        if self.record_time:
            summary.update({f'{k}_seconds': v for k, v in self._seconds.items()})
            if self._num_events:
                summary['updates_per_second'] = self._num_events / max(
                    self._seconds['event'], 1e-12)
        summary.update(fields)
        return self.add('summary', **summary)

    def dumps(self):
        return ''.join(
            json.dumps(record, sort_keys=True, default=_to_builtin) + '\n'
            for record in self.records)

    def save(self, out=None):
        out = out or self.out
        if not out:
            return None
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(out, 'w', encoding='utf-8') as f:
            f.write(self.dumps())
        logger.info(f'Wrote {len(self.records)} records to {out}')
        return out


def load_report(path):
    with open(path, 'r', encoding='utf-8') as f:
        return [json.loads(line) for line in f if line.strip()]
