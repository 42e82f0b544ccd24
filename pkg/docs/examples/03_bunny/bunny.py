import logging

from ludreg.cli.experiments import ExperimentSpec, run_experiment
from ludreg.cli.output import emit_outputs

logging.basicConfig(level=logging.INFO)

# Any ASCII PLY file with a vertex element, e.g. the Stanford bunny
filename = 'path/to/bunny.ply'

# Source points and corrupted targets are drawn from the normalized cloud
spec = ExperimentSpec.for_kind('phase_grid', dim=3, source=filename,
                               n_values='16:1024:geometric',
                               p_values='0.1:0.9:0.1', trials=10,
                               solvers='so,conv')
emit_outputs(run_experiment(spec), 'grid-bunny')
