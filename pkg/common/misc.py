"""
Logging setup and run provenance
"""

import argparse
import logging
import os
import sys

import coloredlogs
import git
import yaml


_logger = logging.getLogger()


def source_revision():
    """(short sha, dirty flag) of the checkout holding this code, or None outside a git work tree"""
    try:
        repo = git.Repo(os.path.dirname(os.path.abspath(__file__)), search_parent_directories=True)
        return repo.head.object.hexsha[:8], repo.is_dirty()
    except (git.exc.InvalidGitRepositoryError, git.exc.NoSuchPathError, ValueError):
        return None


def record_run(opt, log_dir=None):
    """
    Log the command line and source revision; with a log directory, also keep the run's
    arguments in <log_dir>/run.yaml so a result file can be traced back to its settings.
    """
    _logger.info('Command: {}'.format(' '.join(sys.argv)))
    revision = source_revision()
    if revision is not None:
        sha, dirty = revision
        _logger.info('Source revision {}{}'.format(sha, ' (uncommitted changes)' if dirty else ''))

    settings = {key: value for key, value in sorted(vars(opt).items()) if key != 'func' and value is not None}
    _logger.debug('Arguments: {}'.format(', '.join('{}: {}'.format(k, v) for k, v in settings.items())))
    if log_dir is not None:
        if revision is not None:
            settings['revision'] = revision[0]
        with open(os.path.join(log_dir, 'run.yaml'), 'w') as f:
            yaml.safe_dump(settings, f, default_flow_style=False)


def prepare_logger(opt: argparse.Namespace, log_path: str = None):
    """Installs coloredlogs and, when a log directory is given, a file handler

    Args:
        opt: Program arguments, should include the --verbose and --logdir flags
        log_path: Logging path (optional). Overrides opt.logdir

    Returns:
        logger (logging.Logger)
        log_path (str or None): Logging directory
    """
    if log_path is None:
        log_path = getattr(opt, 'logdir', None)

    logger = logging.getLogger()
    level = 'DEBUG' if getattr(opt, 'verbose', False) else 'INFO'
    # diagnostics go to stderr so JSON/CSV on stdout stays clean
    coloredlogs.install(level=level, logger=logger, stream=sys.stderr)

    if log_path is not None:
        os.makedirs(log_path, exist_ok=True)
        file_handler = logging.FileHandler('{}/log.txt'.format(log_path))
        log_formatter = logging.Formatter('%(asctime)s [%(levelname)s] %(name)s - %(message)s')
        file_handler.setFormatter(log_formatter)
        logger.addHandler(file_handler)
        record_run(opt, log_path)
        logger.info('Output and logs will be saved to {}'.format(log_path))

    return logger, log_path
