"""JSON (de)serialization for fitted models.

Each model writes {"method": ..., parameter arrays as plain float lists};
floats round-trip at full precision through Python's repr.
"""

import json

from .baselines import BaselineModel
from .kernel_rba import KernelRbaModel
from .rba import LinearRbaModel

_BASELINE_IDS = ("lr", "iw", "kernel_lr", "kernel_iw")


def model_to_dict(model) -> dict:
    return model.to_dict()


def model_from_dict(d: dict):
    method = d.get("method")
    if method == "rba":
        return LinearRbaModel.from_dict(d)
    if method == "kernel_rba":
        return KernelRbaModel.from_dict(d)
    if method in _BASELINE_IDS:
        return BaselineModel.from_dict(d)
    raise ValueError(f"unknown model method {method!r}")


def save_model(model, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")


def load_model(path):
    with open(path) as fh:
        return model_from_dict(json.load(fh))
