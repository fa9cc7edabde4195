"""
Command-line entry point of the signed-network campaign toolkit.

    python main.py ingest      graph.tsv [partitions.tsv]
    python main.py generate    --kind balanced --n1 50 --n2 50 --out-prefix data/bal
    python main.py select      graph.tsv partitions.tsv --algo cosinemax --t 3 --k 10 --out seeds.json
    python main.py simulate    graph.tsv partitions.tsv seeds.json --t-max 30 --out trajectory.csv
    python main.py benchmark   graph.tsv partitions.tsv --k 10 --t-max 30 --out bench.csv
    python main.py sensitivity graph.tsv partitions.tsv --vary k --values 1,5,10 --t 3 --out sens.csv
    python main.py oracle      graph.tsv partitions.tsv --t 2 --k 2
    python main.py walk        graph.tsv seeds.json --node 0 --t 5 --walks 100000

Exit codes: 0 success, 1 input error, 2 internal invariant violation.
"""

import argparse, json, logging, os, sys
from easydict import EasyDict as edict

from common.misc import prepare_logger
from datasets.edgelist import load_graph, load_partitions, write_edge_list, write_partitions
from datasets.synth import gen_balanced, gen_anti_balanced, gen_random_signed, sample_targets
from lib.benchmark import ALGORITHMS, run_benchmark, select_seeds, sensitivity_budget, sensitivity_targets
from lib.graph import graph_stats, edge_census
from lib.metrics import trajectory_report, report_row, write_report_csv
from lib.montecarlo import estimate_opinion
from lib.propagation import build_transition, propagate_forward, write_trajectory_csv
from lib.seedselect import (CampaignConfig, SeedSet, brute_force_best, cosinemax, parse_budget,
                            simulate_objective)
from lib.utils import InvariantViolation, load_config, merge_args, resolve_threads

_logger = logging.getLogger('main')

DEFAULT_CONFIG = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'configs', 'default.yaml')
ORACLE_TOL = 1e-9


###############################################
# helpers
def _open_out(path):
    if path is None or path == '-':
        return sys.stdout
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    return open(path, 'w')


def _close_out(stream):
    if stream is not sys.stdout:
        stream.close()
    else:
        stream.flush()


def _load_instance(config, need_partitions=True):
    """graph, partition vector (or None) and the optional id remapping"""
    index = None
    try:
        if config.remap:
            g, index = load_graph(config.graph, remap=True)
        else:
            g = load_graph(config.graph)
    except ValueError as e:
        raise ValueError(f'{config.graph}: {e}') from e
    rho = None
    if config.get('partitions'):
        try:
            rho = load_partitions(config.partitions, g.n, index=index)
        except ValueError as e:
            raise ValueError(f'{config.partitions}: {e}') from e
    elif need_partitions:
        raise ValueError('a partition file is required')
    _logger.info('loaded %r', g)
    return g, rho, index


def _seeds_to_external(seeds, index):
    if index is None:
        return seeds
    return SeedSet([(index.to_external(e.node), e.opinion, e.score) for e in seeds], seeds.k)


def _seeds_to_dense(seeds, index, n):
    if index is not None:
        seeds = SeedSet([(index.to_dense(e.node), e.opinion, e.score) for e in seeds], seeds.k)
    for e in seeds:
        if e.node >= n:
            raise ValueError(f'seed node {e.node} out of range for a graph with {n} nodes')
    return seeds


def _algos(value):
    if isinstance(value, str):
        value = [a.strip() for a in value.split(',') if a.strip()]
    return list(value)


###############################################
# subcommands
def cmd_ingest(config):
    g, rho, _ = _load_instance(config, need_partitions=False)
    stats = graph_stats(g)
    if rho is not None:
        stats['targets'] = {'v1': int(rho.v1.size), 'v2': int(rho.v2.size)}
        stats['census'] = edge_census(g, rho)
    if config.get('dump_transition'):
        build_transition(g).save(config.dump_transition)
        _logger.info('transition matrix written to %s', config.dump_transition)
    out = _open_out(config.get('out'))
    out.write(json.dumps(stats, indent=2) + '\n')
    _close_out(out)


def cmd_generate(config):
    weight_range = (float(config.weight_low), float(config.weight_high))
    if config.kind in ('balanced', 'anti-balanced'):
        gen = gen_balanced if config.kind == 'balanced' else gen_anti_balanced
        g, rho = gen(config.n1, config.n2, config.p_intra, config.p_inter, weight_range=weight_range,
                     rng_seed=config.rng_seed, ensure_strong=config.ensure_strong)
    elif config.kind == 'random':
        g = gen_random_signed(config.n, config.p_edge, config.p_negative, rng_seed=config.rng_seed,
                              weight_range=weight_range)
        rho = sample_targets(g.n, config.get('target_fraction', 1.0), config.rng_seed)
    else:
        raise ValueError(f"unknown graph kind '{config.kind}', choose balanced, anti-balanced or random")

    prefix = config.out_prefix
    os.makedirs(os.path.dirname(os.path.abspath(prefix)), exist_ok=True)
    with open(f'{prefix}.edges.tsv', 'w') as f:
        f.write(f'# {config.kind} signed graph, rng_seed={config.rng_seed}\n')
        write_edge_list(g, f)
    with open(f'{prefix}.partitions.tsv', 'w') as f:
        write_partitions(rho, f)
    _logger.info('wrote %s.edges.tsv and %s.partitions.tsv (%r)', prefix, prefix, g)


def cmd_select(config):
    g, rho, index = _load_instance(config)
    k = parse_budget(config.k, g.n)
    cfg = CampaignConfig(int(config.t), k)
    if config.algo != 'cosinemax' and rho.n_targets < k:
        # the baselines only pick among targeted users
        raise ValueError(f'{config.algo} needs k <= |V1 u V2| = {rho.n_targets} candidates, got k={k}')
    P = build_transition(g)
    seeds = select_seeds(config.algo, g, P, rho, cfg, config.rng_seed)
    if config.algo == 'cosinemax':
        _logger.info('predicted objective (sum of |eps|): %r', seeds.predicted_objective)
    _logger.info('simulated objective rho^T C_%d: %r', cfg.t, simulate_objective(P, rho, seeds, cfg.t))

    seeds = _seeds_to_external(seeds, index)
    if config.get('out'):
        seeds.save(config.out)
        _logger.info('%d seeds written to %s', len(seeds), config.out)
    else:
        sys.stdout.write(seeds.to_json() + '\n')


def cmd_simulate(config):
    g, rho, index = _load_instance(config)
    seeds = _seeds_to_dense(SeedSet.load(config.seeds), index, g.n)
    P = build_transition(g)
    reports = trajectory_report(P, rho, seeds, int(config.t_max), config.threshold)
    label = config.get('label') or os.path.splitext(os.path.basename(config.seeds))[0]
    out = _open_out(config.get('out'))
    write_report_csv([report_row(r, label) for r in reports], out)
    _close_out(out)
    if config.get('node_trajectory'):
        with open(config.node_trajectory, 'w') as f:
            write_trajectory_csv(P, seeds.to_vector(g.n), int(config.t_max), f)


def cmd_benchmark(config):
    g, rho, _ = _load_instance(config)
    k = parse_budget(config.k, g.n)
    rows = run_benchmark(g, rho, k, int(config.t_max), _algos(config.algos), rng_seed=config.rng_seed,
                         threshold=config.threshold, repeats=int(config.repeats), verbose=config.verbose)
    out = _open_out(config.get('out'))
    write_report_csv(rows, out)
    _close_out(out)


def cmd_sensitivity(config):
    g, rho, _ = _load_instance(config, need_partitions=(config.vary == 'k'))
    values = [v.strip() for v in str(config.sweep_values).split(',') if v.strip()]
    if not values:
        raise ValueError('--values needs at least one entry')
    algos = _algos(config.algos)
    if config.vary == 'k':
        rows = sensitivity_budget(g, rho, [parse_budget(v, g.n) for v in values], int(config.t), algos,
                                  config.rng_seed, config.threshold, config.verbose)
        extra = ['k']
    elif config.vary == 'targets':
        rows = sensitivity_targets(g, [float(v) for v in values], parse_budget(config.k, g.n), int(config.t),
                                   algos, config.rng_seed, config.threshold, config.verbose)
        extra = ['target_fraction']
    else:
        raise ValueError(f"--vary must be 'k' or 'targets', got '{config.vary}'")
    out = _open_out(config.get('out'))
    write_report_csv(rows, out, extra_fields=extra)
    _close_out(out)


def cmd_oracle(config):
    g, rho, index = _load_instance(config)
    cfg = CampaignConfig(int(config.t), parse_budget(config.k, g.n))
    P = build_transition(g)
    best, optimal = brute_force_best(P, rho, cfg, verbose=config.verbose)
    seeds = cosinemax(P, rho, cfg)
    achieved = simulate_objective(P, rho, seeds, cfg.t)
    report = {
        't': cfg.t,
        'k': cfg.k,
        'optimum': best,
        'optimal_seeds': _seeds_to_external(optimal, index).to_records(),
        'cosinemax_objective': achieved,
        'cosinemax_seeds': _seeds_to_external(seeds, index).to_records(),
        'match': abs(best - achieved) <= ORACLE_TOL,
    }
    sys.stdout.write(json.dumps(report, indent=2) + '\n')
    if not report['match']:
        raise InvariantViolation(f'cosinemax objective {achieved!r} differs from the optimum {best!r}')


def cmd_walk(config):
    g, _, index = _load_instance(config, need_partitions=False)
    seeds = _seeds_to_dense(SeedSet.load(config.seeds), index, g.n)
    node = index.to_dense(config.node) if index is not None else int(config.node)
    c0 = seeds.to_vector(g.n)
    estimate, stderr = estimate_opinion(g, c0, node, int(config.t), int(config.walks), config.rng_seed,
                                        threads=config.threads)
    exact = float(propagate_forward(build_transition(g), c0, int(config.t)).values[node])
    result = {'node': int(config.node), 't': int(config.t), 'walks': int(config.walks),
              'estimate': estimate, 'stderr': stderr, 'matrix_value': exact}
    sys.stdout.write(json.dumps(result, indent=2) + '\n')


###############################################
# argument parsing
def get_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=DEFAULT_CONFIG, help='Path to the config file.')
    common.add_argument('--verbose', action='store_true', default=None, help='Debug logging and progress bars.')
    common.add_argument('--logdir', type=str, default=None, help='Also write logs to <logdir>/log.txt.')
    common.add_argument('--threads', type=int, default=None, help='Worker cap (falls back to COSINE_THREADS).')
    common.add_argument('--rng-seed', dest='rng_seed', type=int, default=None, help='Seed of every random draw.')

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument('graph', type=str, help='Edge list TSV: src, dst, weight.')
    instance.add_argument('partitions', type=str, help='Partition TSV: node, group (1 or 2).')
    instance.add_argument('--remap', action='store_true', default=None, help='Map sparse node ids onto 0..n-1.')

    parser = argparse.ArgumentParser(description='Contrasting-opinion seed selection on signed networks.')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('ingest', parents=[common], help='Validate inputs and print statistics as JSON.')
    p.add_argument('graph', type=str)
    p.add_argument('partitions', type=str, nargs='?', default=None)
    p.add_argument('--remap', action='store_true', default=None)
    p.add_argument('--dump-transition', dest='dump_transition', type=str, default=None,
                   help='Write the transition matrix as a binary .npz dump.')
    p.add_argument('--out', type=str, default=None)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser('generate', parents=[common], help='Write a synthetic signed graph and its partitions.')
    p.add_argument('--kind', type=str, default=None, choices=['balanced', 'anti-balanced', 'random'])
    for name, kind in [('n1', int), ('n2', int), ('n', int), ('p-intra', float), ('p-inter', float),
                       ('p-edge', float), ('p-negative', float), ('weight-low', float), ('weight-high', float),
                       ('target-fraction', float)]:
        p.add_argument(f'--{name}', dest=name.replace('-', '_'), type=kind, default=None)
    p.add_argument('--no-strong', dest='ensure_strong', action='store_false', default=None,
                   help='Skip the cycle that makes two-block graphs strongly connected.')
    p.add_argument('--out-prefix', dest='out_prefix', type=str, required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser('select', parents=[common, instance], help='Select a seed set.')
    p.add_argument('--algo', type=str, default=None, choices=list(ALGORITHMS))
    p.add_argument('--t', type=int, default=None)
    p.add_argument('--k', type=str, default=None, help='Seed budget, a count or a percentage like 5%%.')
    p.add_argument('--out', type=str, default=None, help='.json or .csv; JSON on stdout when omitted.')
    p.set_defaults(func=cmd_select)

    p = sub.add_parser('simulate', parents=[common, instance], help='Metrics trajectory of a seed set.')
    p.add_argument('seeds', type=str, help='Seed set file (.json or .csv).')
    p.add_argument('--t-max', dest='t_max', type=int, default=None)
    p.add_argument('--threshold', type=float, default=None)
    p.add_argument('--label', type=str, default=None, help='Value of the algorithm column.')
    p.add_argument('--out', type=str, default=None)
    p.add_argument('--node-trajectory', dest='node_trajectory', type=str, default=None,
                   help='Also write per-node opinions as t,node,value CSV.')
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser('benchmark', parents=[common, instance], help='Compare algorithms over horizons.')
    p.add_argument('--k', type=str, default=None)
    p.add_argument('--t-max', dest='t_max', type=int, default=None)
    p.add_argument('--algos', type=str, default=None, help='Comma separated subset of ' + ','.join(ALGORITHMS))
    p.add_argument('--repeats', type=int, default=None)
    p.add_argument('--threshold', type=float, default=None)
    p.add_argument('--out', type=str, default=None)
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser('sensitivity', parents=[common], help='Sweep the seed budget or the target share.')
    p.add_argument('graph', type=str)
    p.add_argument('partitions', type=str, nargs='?', default=None)
    p.add_argument('--remap', action='store_true', default=None)
    p.add_argument('--vary', type=str, required=True, choices=['k', 'targets'])
    p.add_argument('--values', dest='sweep_values', type=str, required=True, help='Comma separated budgets or target fractions.')
    p.add_argument('--t', type=int, default=None)
    p.add_argument('--k', type=str, default=None)
    p.add_argument('--algos', type=str, default=None)
    p.add_argument('--threshold', type=float, default=None)
    p.add_argument('--out', type=str, default=None)
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser('oracle', parents=[common, instance], help='Brute-force optimum vs cosinemax.')
    p.add_argument('--t', type=int, default=None)
    p.add_argument('--k', type=str, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser('walk', parents=[common], help='Monte-Carlo estimate of one opinion.')
    p.add_argument('graph', type=str)
    p.add_argument('seeds', type=str, help='Seed set file giving C_0.')
    p.add_argument('--remap', action='store_true', default=None)
    p.add_argument('--node', type=int, required=True)
    p.add_argument('--t', type=int, default=None)
    p.add_argument('--walks', type=int, default=None)
    p.set_defaults(func=cmd_walk)

    return parser


def main(argv=None):
    args = get_parser().parse_args(argv)
    prepare_logger(args)
    try:
        config = load_config(args.config)
        config['threads'] = resolve_threads(args.threads, config.get('threads'))
        args.threads = None
        config = merge_args(config, args)
        config.setdefault('remap', False)
        config = edict(config)
        config.func(config)
    except InvariantViolation as e:
        _logger.error('invariant violated: %s', e)
        return 2
    except (ValueError, OSError) as e:
        _logger.error('%s', e)
        return 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
