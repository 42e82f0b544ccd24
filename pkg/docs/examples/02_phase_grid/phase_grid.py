from ludreg.cli.experiments import ExperimentSpec, run_experiment
from ludreg.cli.output import emit_outputs

# A small recovery grid: N = 16, ..., 256 and p = 0.2, ..., 0.9
spec = ExperimentSpec.for_kind('phase_grid', dim=3,
                               n_values='16:256:geometric',
                               p_values='0.2:0.9:0.1', trials=5,
                               solvers='so,conv')
result = run_experiment(spec)

# Recovery probability of the descent on SO(3), one row per p
print(result.probabilities('so'))

# results.csv, manifest.json and one heatmap per solver
for path in emit_outputs(result, 'grid-d3'):
    print(path)
