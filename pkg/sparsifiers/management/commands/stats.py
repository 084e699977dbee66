from hypergraphs.formats import load_instance
from hypergraphs.reduction import reduce_hypergraph
from hypergraphs.structures import Graph, as_hypergraph, clique_expansion
from sparsifiers.management.base import SparsifyBaseCommand
from sparsifiers.spectral import component_labels


def instance_statistics(loaded):
    """Multiplicity-aware summary of a loaded instance."""
    instance = loaded.instance
    hypergraph = as_hypergraph(instance)
    stats = {
        'kind': 'graph' if isinstance(instance, Graph) else 'hypergraph',
        'n': instance.n,
        'm': instance.m,
        'rank': hypergraph.rank,
        'd_max': float(instance.d_max),
        'd_avg': float(instance.d_avg),
        'total_weight': float(instance.weights.sum()),
        'unweighted': bool(instance.is_unweighted),
        'scale': loaded.scale,
        'relabelled': loaded.labels != [str(i) for i in range(instance.n)],
    }
    if isinstance(instance, Graph):
        stats['simple'] = bool(instance.is_simple)
    if instance.n:
        stats['components'] = int(component_labels(clique_expansion(hypergraph))[0])
        _, mapping = reduce_hypergraph(hypergraph)
        stats['reduced_n'] = mapping.reduced_n
        stats['degree_cap'] = mapping.degree_cap
    return stats


class Command(SparsifyBaseCommand):
    help = "Print size, degree and component statistics of a graph or hypergraph file."
    command_name = 'stats'

    def add_arguments(self, parser):
        parser.add_argument('input', help="Graph or hypergraph file.")
        parser.add_argument('--json', action='store_true', help="Machine-readable output on stdout.")

    def resolve_config(self, options, command=None):
        return None

    def perform(self, config, options):
        return instance_statistics(load_instance(options['input'])), None

    def summary_lines(self, payload):
        return [f"{key}: {payload[key]}" for key in sorted(payload)]
