"""
General utility functions

Config loading, seeding and the error types shared by the campaign toolkit.
"""

import os
import yaml
import numpy as np

ZERO_TOL = 1e-12  # |T_t| below this counts as zero


class InvariantViolation(RuntimeError):
    """Raised when a result contradicts a guarantee the library relies on (e.g. oracle mismatch)."""
    pass


def load_config(path):
    """
    Loads config file:

    Args:
        path (str): path to the config file

    Returns:
        config (dict): dictionary of the configuration parameters, merge sub_dicts

    """
    with open(path, 'r') as f:
        cfg = yaml.safe_load(f) or dict()

    config = dict()
    for key, value in cfg.items():
        for k, v in value.items():
            if k in config:
                raise ValueError(f"config key '{k}' appears in more than one section ({path})")
            config[k] = v

    return config


def merge_args(config, args):
    """
    Overwrite config entries with every CLI argument that was given explicitly (not None)
    """
    for k, v in vars(args).items():
        if v is not None:
            config[k] = v
    return config


def resolve_threads(flag=None, config_value=None):
    """
    --threads flag, then the COSINE_THREADS environment variable, then the config value, then 1
    """
    if flag is not None:
        threads = flag
    elif os.environ.get('COSINE_THREADS'):
        try:
            threads = int(os.environ['COSINE_THREADS'])
        except ValueError:
            raise ValueError(f"COSINE_THREADS must be an integer, got '{os.environ['COSINE_THREADS']}'")
    elif config_value is not None:
        threads = config_value
    else:
        threads = 1
    if threads < 1:
        raise ValueError(f'thread count must be >= 1, got {threads}')
    return int(threads)


def make_rng(seed):
    """
    Independent generator for one randomized routine; seeds must be explicit
    """
    if seed is None:
        raise ValueError('an explicit rng seed is required')
    return np.random.default_rng(seed)
