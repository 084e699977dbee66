from sparsifiers.management.construction import ConstructionCommand


class Command(ConstructionCommand):
    help = "Additive cut sparsifier of an unweighted (hyper)graph by iterated halving."
    command_name = 'sparsify_cut'
    constant_arguments = ('c_iter', 'threshold_constant', 'resample_cap_factor', 'resample_retries', 'trials')
