"""Secure-aggregation toolkit: quantization pipeline, Shamir sharing,
Joye-Libert and masking-based aggregation, plus the federated simulator."""

try:
    from ._secagg import *  # noqa: F401,F403  (installed package layout)
    from ._secagg import __doc__ as _core_doc
except ImportError:  # build-tree layout: extension sits next to the package
    from _secagg import *  # noqa: F401,F403
    from _secagg import __doc__ as _core_doc

import json as _json


def run_experiment_dict(config: dict) -> dict:
    """Run a federated experiment from a config dictionary."""
    return run_experiment(_json.dumps(config))  # noqa: F405


__all__ = [name for name in dir() if not name.startswith("_")]
