"""
Trace Exporters
---------------
Write traces as CSV with a JSON sidecar.

Floats use '%.17g' so a rerun with the same inputs is byte-identical.
"""
import logging
from pathlib import Path

import pandas as pd

from apps.dp.serializers import TraceSummarySerializer
from core.renderers import render_json
from core.utils import ensure_dir

logger = logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def write_frame(frame, path):
    path = Path(path)
    ensure_dir(path.parent)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path


def write_trace_csv(trace, path):
    path = write_frame(trace.to_frame(), path)
    logger.debug(f"Wrote {len(trace.steps)} trace rows to {path}")
    return path


def trace_summary(trace, **metadata):
    summary = dict(TraceSummarySerializer(trace).data)
    summary.update(metadata)
    return summary


def write_trace(trace, directory, run_id, **metadata):
    """
    Write <run_id>.csv and <run_id>.json into directory.

    Returns:
        tuple: (csv path, json path, summary dict)
    """
    directory = ensure_dir(directory)
    csv_path = write_trace_csv(trace, directory / f"{run_id}.csv")
    summary = trace_summary(trace, run_id=run_id, **metadata)
    json_path = directory / f"{run_id}.json"
    json_path.write_bytes(render_json(summary))
    return csv_path, json_path, summary


def combined_error_frame(sources_by_seed):
    """
    Long-format (seed, k, err_inf) frame across seeds, ready for plotting.

    Each source is an IterationTrace or the path of a trace CSV written earlier.
    """
    frames = []
    for seed, source in sources_by_seed.items():
        if hasattr(source, 'to_frame'):
            frame = source.to_frame()[['k', 'err_inf']]
        else:
            frame = pd.read_csv(source, usecols=['k', 'err_inf'])
        frame.insert(0, 'seed', seed)
        frames.append(frame)
    return pd.concat(frames, ignore_index=True)
