"""sparsifiers.pipelines

The end-to-end constructions behind the sparsify commands: load the input,
reduce to bounded degree where the construction needs it, build the
sparsifier, lift it back, certify it and write the artifacts.

Artifacts are pure functions of (input bytes, config, seed): nothing time or
machine dependent goes into them.
"""
import logging
from dataclasses import dataclass
from pathlib import Path

from hypergraphs.exceptions import InvalidInstanceError
from hypergraphs.formats import load_instance, serialize, write_label_map
from hypergraphs.reduction import lift_edges, reduce_graph, reduce_hypergraph
from hypergraphs.structures import Graph, as_hypergraph
from verification.checks import certify

from .game import det_sparsify
from .lll import sparsify_cut, sparsify_spectral_graph
from .results import SparsifierResult
from .spectral import sample_sparsifier, sparsify_hypergraph

logger = logging.getLogger(__name__)

GUARANTEE_OF = {
    'sparsify_cut': 'cut',
    'sparsify_spectral': 'spectral',
    'sparsify_det': 'det',
    'sparsify_hyper': 'hyper',
}


@dataclass(frozen=True, eq=False)
class PipelineOutcome:
    command: str
    instance: object
    result: SparsifierResult
    output: object
    report: object
    labels: list = None

    @property
    def passed(self):
        return self.report.passed


def _reduction_metadata(mapping):
    return {
        'reduced_n': mapping.reduced_n,
        'degree_cap': mapping.degree_cap,
        'identity': mapping.is_identity,
    }


def _lifted(result, mapping):
    metadata = dict(result.metadata, reduction=_reduction_metadata(mapping))
    return SparsifierResult(lift_edges(mapping, result.edge_indices), result.scale, metadata)


def _require_unweighted_graph(instance, command):
    if not isinstance(instance, Graph):
        raise InvalidInstanceError(f"{command} needs a graph input")
    if not instance.is_unweighted:
        raise InvalidInstanceError(f"{command} needs an unweighted input")


def build_cut(instance, config):
    hypergraph = as_hypergraph(instance)
    if not hypergraph.is_unweighted:
        raise InvalidInstanceError("sparsify_cut needs an unweighted input")
    reduced, mapping = reduce_hypergraph(hypergraph)
    result, _ = sparsify_cut(
        reduced, config.epsilon, config.seed,
        c_iter=config.c_iter,
        threshold_constant=config.threshold_constant,
        cap_factor=config.resample_cap_factor,
        retries=config.resample_retries,
    )
    result = _lifted(result, mapping)
    return result, result.selected(instance)


def build_spectral(instance, config):
    _require_unweighted_graph(instance, 'sparsify_spectral')
    reduced, mapping = reduce_graph(instance)
    result, _ = sparsify_spectral_graph(
        reduced, config.epsilon, config.seed,
        c_iter=config.c_iter,
        threshold_constant=config.threshold_constant,
        cap_factor=config.resample_cap_factor,
        retries=config.resample_retries,
    )
    result = _lifted(result, mapping)
    return result, result.selected(instance)


def build_det(instance, config):
    _require_unweighted_graph(instance, 'sparsify_det')
    reduced, mapping = reduce_graph(instance)
    result = det_sparsify(
        reduced, config.epsilon,
        c_t=config.c_t,
        eta_constant=config.eta_constant,
        max_vertices=config.max_det_vertices,
    )
    result = _lifted(result, mapping)
    return result, result.selected(instance)


def build_hyper(instance, config):
    hypergraph = as_hypergraph(instance)
    result, plan = sparsify_hypergraph(
        hypergraph, config.epsilon, config.seed, c_l=config.c_l, limit=config.max_dense_vertices
    )
    sparse = sample_sparsifier(hypergraph, plan, config.seed)
    if isinstance(instance, Graph):
        sparse_graph = instance.select(result.edge_indices)
        sparse = Graph(sparse_graph.n, sparse_graph.edges, sparse.weights)
    return result, sparse


BUILDERS = {
    'sparsify_cut': build_cut,
    'sparsify_spectral': build_spectral,
    'sparsify_det': build_det,
    'sparsify_hyper': build_hyper,
}


def construct(command, instance, config):
    """
    (result, output, report) for one construction. ``output`` is what is
    written: the unscaled multiset F, or the reweighted sparsifier for
    hypergraph sampling.
    """
    try:
        builder = BUILDERS[command]
    except KeyError:
        raise ValueError(f"unknown construction {command!r}") from None
    result, output = builder(instance, config)
    guarantee = GUARANTEE_OF[command]
    # the sampled sparsifier already carries its weights
    scale = 1.0 if guarantee == 'hyper' else result.scale
    report = certify(
        guarantee, instance, output, scale, config.epsilon,
        slack=config.slack, trials=config.trials, seed=config.seed or 0,
    )
    report.scale = result.scale
    report.config = config.as_dict()
    report.seeds = [] if config.seed is None else [config.seed]
    report.details['construction'] = result.metadata
    report.details['input_size'] = instance.m
    report.details['output_size'] = result.size
    logger.info(
        "%s: kept %d of %d edges, scale %g, %s",
        command, result.size, instance.m, result.scale, 'pass' if report.passed else 'FAIL',
    )
    return result, output, report


def write_artifacts(outcome, output_path=None, report_path=None):
    """Sparsifier file, label map and report; returns the paths written."""
    written = []
    if output_path:
        Path(output_path).write_text(serialize(outcome.output, outcome.result.scale))
        written.append(str(output_path))
        if outcome.labels is not None:
            written.append(str(write_label_map(output_path, outcome.labels)))
    if report_path:
        Path(report_path).write_text(outcome.report.to_json())
        written.append(str(report_path))
    return written


def run(command, config):
    """Load ``config.input_path``, construct, certify and write artifacts."""
    if command not in BUILDERS:
        raise ValueError(f"unknown construction {command!r}")
    loaded = load_instance(config.input_path)
    result, output, report = construct(command, loaded.instance, config)
    outcome = PipelineOutcome(command, loaded.instance, result, output, report, loaded.labels)
    write_artifacts(outcome, config.output_path, config.report_path)
    return outcome
