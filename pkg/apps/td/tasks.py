"""
TD Tasks
--------
Celery tasks for multi-seed TD runs.

Arguments and results are plain JSON so the tasks run unchanged on a
real broker.
"""
from celery import shared_task

from apps.dp.exporters import trace_summary, write_trace
from apps.mdp.services.loader import load_mdp_spec
from apps.mdp.services.model import cached_derived_model
from apps.td.services.algorithms import td_run
from apps.td.services.sweeps import homogeneous_model
from apps.td.types import TdRunConfig


@shared_task
def run_td_seed(fixture, config, seed, out_dir=None, run_id=None, homogeneous=False):
    """
    Run one seed of a TD configuration.

    Args:
        fixture: path of the problem file
        config: TdRunConfig.to_dict()
        seed: seed for this run
        out_dir: when given, write <run_id>.csv and <run_id>.json there
        run_id: file stem for the outputs
        homogeneous: zero the rewards before running

    Returns:
        dict: trace summary with seed, fixture hash and output paths
    """
    spec = load_mdp_spec(fixture)
    model = cached_derived_model(spec)
    if homogeneous:
        model = homogeneous_model(model)

    run_config = TdRunConfig.from_dict(config).with_seed(seed)
    trace = td_run(model, run_config)
    metadata = {
        'seed': seed,
        'fixture_sha256': spec.content_hash,
        'config': run_config.to_dict(),
        'homogeneous': homogeneous,
    }

    if out_dir is None:
        return trace_summary(trace, **metadata)

    csv_path, json_path, summary = write_trace(trace, out_dir, run_id, **metadata)
    summary['outputs'] = [str(csv_path), str(json_path)]
    return summary
