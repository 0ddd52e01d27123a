"""Self-describing JSON documents for fitted estimators.

Matrices are stored as ``{"shape": [rows, cols], "data": [...]}`` in
row-major order. Python's float repr round-trips exactly, so loading and
re-saving a model reproduces the file byte for byte.
"""
import json
from pathlib import Path

import numpy as np

from .estimator import PCSDA
from .exceptions import ConfigError
from .kernel import KernelMap
from .model import PcsdaModel

FORMAT = "pcsda-model"
VERSION = 1


def _mat(a):
    a = np.asarray(a, dtype=float)
    return {"shape": list(a.shape), "data": [float(v) for v in a.ravel()]}


def _unmat(obj):
    return np.asarray(obj["data"], dtype=float).reshape(obj["shape"])


def to_dict(est):
    m = est.model_
    doc = {
        "format": FORMAT,
        "version": VERSION,
        "params": est.get_params(),
        "n_features_in": int(est.n_features_in_),
        "model": {
            "d": m.d,
            "n_features": m.n_features,
            "n_subclasses": int(m.n_subclasses),
            "W": _mat(m.W),
            "phi_p": _mat(m.phi_p),
            "phi_o": _mat(m.phi_o),
            "mean": _mat(m.mean),
            "eigenvalues": _mat(m.eigenvalues),
            "prior_p": float(m.prior_p),
            "prior_n": float(m.prior_n),
            "ridge": float(m.ridge),
        },
        "kernel": None,
    }
    km = est.kernel_map_
    if km is not None:
        doc["kernel"] = {
            "kind": est.kernel,
            "sigma": float(km.sigma),
            "sigma_rule": "mean-positive-pairwise" if est.sigma == "auto" else "manual",
            "cutoff": float(km.cutoff),
            "train_points": _mat(km.train_points),
            "U": _mat(km.U),
            "scale": _mat(km.scale),
        }
    return doc


def from_dict(doc):
    if doc.get("format") != FORMAT:
        raise ConfigError(f"not a {FORMAT} document")
    if doc.get("version") != VERSION:
        raise ConfigError(f"unsupported model version {doc.get('version')!r}")
    try:
        est = PCSDA(**doc["params"])
        m = doc["model"]
        est.model_ = PcsdaModel(
            W=_unmat(m["W"]),
            phi_p=_unmat(m["phi_p"]),
            phi_o=_unmat(m["phi_o"]),
            mean=_unmat(m["mean"]),
            prior_p=m["prior_p"],
            prior_n=m["prior_n"],
            eigenvalues=_unmat(m["eigenvalues"]),
            n_subclasses=m["n_subclasses"],
            ridge=m["ridge"],
        )
        est.n_features_in_ = doc["n_features_in"]
        est.classes_ = np.array([0, 1])
        k = doc["kernel"]
        est.kernel_map_ = None
        est.sigma_ = None
        if k is not None:
            est.sigma_ = k["sigma"]
            est.kernel_map_ = KernelMap(_unmat(k["train_points"]), _unmat(k["U"]), _unmat(k["scale"]),
                                        k["sigma"], k["cutoff"])
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed model document: {exc}") from None
    return est


def dumps(est):
    return json.dumps(to_dict(est), indent=1, sort_keys=True) + "\n"


def loads(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"model file is not valid JSON: {exc}") from None
    return from_dict(doc)


def save_model(est, path):
    Path(path).write_text(dumps(est), encoding="utf-8")


def load_model(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"model file not found: {path}")
    return loads(path.read_text(encoding="utf-8"))
