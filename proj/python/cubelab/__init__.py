"""Multiple ergodic averages over cubes."""

import json

from ._core import (
    CubelabError,
    cube3,
    cubek,
    default_config,
    lemma3,
    lemma4,
    orbit,
    report_csv,
    seminorm,
    set_thread_count,
    thread_count,
    vdc_bound,
    ww_sup,
)
from ._core import run as _run

__all__ = [
    "CubelabError",
    "cube3",
    "cubek",
    "default_config",
    "lemma3",
    "lemma4",
    "orbit",
    "report_csv",
    "run",
    "seminorm",
    "set_thread_count",
    "thread_count",
    "vdc_bound",
    "ww_sup",
]


def run(config):
    """Run an experiment given as a JSON string or a dict."""
    if not isinstance(config, str):
        config = json.dumps(config)
    return _run(config)
