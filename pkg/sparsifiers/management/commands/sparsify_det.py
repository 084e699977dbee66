from sparsifiers.management.construction import ConstructionCommand


class Command(ConstructionCommand):
    help = "Deterministic additive sparsifier of an unweighted graph from the density-matrix game."
    command_name = 'sparsify_det'
    constant_arguments = ('c_t', 'eta_constant', 'slack')
