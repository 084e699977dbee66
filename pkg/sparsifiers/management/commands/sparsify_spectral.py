from sparsifiers.management.construction import ConstructionCommand


class Command(ConstructionCommand):
    help = "Additive spectral sparsifier of an unweighted graph by iterated bilateral halving."
    command_name = 'sparsify_spectral'
    constant_arguments = ('c_iter', 'threshold_constant', 'resample_cap_factor', 'resample_retries', 'slack')
