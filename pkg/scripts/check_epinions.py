"""
Checks ingestion of a locally supplied Epinions trust/distrust edge list against the published
dataset characteristics. The file is not shipped; pass its path.

    python scripts/check_epinions.py data/epinions.tsv [--remap]
"""
import argparse, json, logging, os, sys
cwd = os.getcwd()
sys.path.append(cwd)

from common.misc import prepare_logger
from datasets.edgelist import load_graph
from lib.graph import graph_stats

EXPECTED = {'n': 132585, 'edges': 701926, 'positive': 605854, 'negative': 96072}

_logger = logging.getLogger('check_epinions')


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('graph', type=str, help='Epinions edge list: src, dst, sign (tab separated)')
    parser.add_argument('--remap', action='store_true', help='Map sparse user ids onto 0..n-1')
    parser.add_argument('--verbose', action='store_true')
    args = parser.parse_args()
    prepare_logger(args)

    g = load_graph(args.graph, remap=True)[0] if args.remap else load_graph(args.graph)
    stats = graph_stats(g)
    print(json.dumps({key: stats[key] for key in EXPECTED}, indent=2))

    mismatched = [key for key, value in EXPECTED.items() if stats[key] != value]
    for key in mismatched:
        _logger.error('%s: got %d, expected %d', key, stats[key], EXPECTED[key])
    if not mismatched:
        _logger.info('all counts match (%.0f%% positive edges)', 100.0 * stats['positive_fraction'])
    sys.exit(1 if mismatched else 0)
