from sparsifiers.management.construction import ConstructionCommand


class Command(ConstructionCommand):
    help = "Multiplicative spectral sparsifier of a weighted hypergraph by resistance sampling."
    command_name = 'sparsify_hyper'
    constant_arguments = ('c_l', 'trials')
