import json

import numpy as np
import pytest

from pcsda import PCSDA
from pcsda.exceptions import ConfigError
from pcsda.serialization import dumps, load_model, loads, save_model

from synth import blobs, nested_rings


@pytest.fixture(params=[None, "rbf"])
def fitted(request):
    X, y = blobs(0) if request.param is None else nested_rings(0)
    est = PCSDA(n_components=2, n_subclasses=3, kernel=request.param).fit(X, y)
    return est, X


def test_roundtrip_predictions(fitted, tmp_path):
    est, X = fitted
    path = tmp_path / "m.json"
    save_model(est, path)
    back = load_model(path)
    np.testing.assert_array_equal(back.decision_function(X), est.decision_function(X))
    np.testing.assert_array_equal(back.rank(X).order, est.rank(X).order)
    assert back.get_params() == est.get_params()


def test_resave_is_byte_identical(fitted):
    est, _ = fitted
    text = dumps(est)
    assert dumps(loads(text)) == text


def test_kernel_block(fitted):
    est, _ = fitted
    doc = json.loads(dumps(est))
    if est.kernel is None:
        assert doc["kernel"] is None
    else:
        assert doc["kernel"]["sigma_rule"] == "mean-positive-pairwise"
        assert doc["kernel"]["sigma"] == est.sigma_


@pytest.mark.parametrize("mutate, msg", [
    (lambda d: d.update(format="other"), "not a"),
    (lambda d: d.update(version=99), "version"),
    (lambda d: d["model"].pop("W"), "malformed"),
])
def test_rejects_bad_documents(fitted, mutate, msg):
    doc = json.loads(dumps(fitted[0]))
    mutate(doc)
    with pytest.raises(ConfigError, match=msg):
        loads(json.dumps(doc))


def test_rejects_non_json(tmp_path):
    with pytest.raises(ConfigError):
        loads("{nope")
    with pytest.raises(ConfigError, match="not found"):
        load_model(tmp_path / "missing.json")
