import json
import math

import fblab


BSC11 = json.dumps({"type": "dmc", "W": [[0.89, 0.11], [0.11, 0.89]]})


def test_capacity_bsc():
    sol = fblab.capacity(BSC11, tol=1e-9)
    target = 1.0 - (-(0.11 * math.log2(0.11) + 0.89 * math.log2(0.89)))
    assert abs(sol["C"] - target) < 1e-7
    assert abs(sol["caod"][0] - 0.5) < 1e-6
    assert sol["units"] == "bits"


def test_capacity_awgn():
    sol = fblab.capacity(json.dumps({"type": "awgn", "power": 1.0}))
    assert abs(sol["C"] - 0.5) < 1e-12
    assert abs(sol["V"] - 0.7805133678771029) < 1e-9


def test_kl_tv():
    assert abs(fblab.kl([0.5, 0.5], [0.25, 0.75]) - 0.20751874963942185) < 1e-12
    assert abs(fblab.tv([0.5, 0.5], [0.25, 0.75]) - 0.25) < 1e-15


def test_beta_alpha():
    out = fblab.beta_alpha(0.5, [0.5, 0.5], [0.25, 0.75])
    assert abs(out["beta"] - 0.25) < 1e-12
    ident = fblab.beta_alpha(0.3, [0.2, 0.8], [0.2, 0.8])
    assert ident["beta"] == 0.3


def test_wasserstein_matches_tv():
    out = fblab.wasserstein([0.5, 0.5], [0.25, 0.75])
    assert abs(out["value"] - 0.25) < 1e-10
    assert abs(out["duality_gap"]) < 1e-9


def test_analyze_repetition():
    code = json.dumps(
        {"n": 3, "M": 2, "alphabet": "dmc", "criterion": "max", "words": [[0, 0, 0], [1, 1, 1]]}
    )
    bsc2 = json.dumps({"type": "dmc", "W": [[0.8, 0.2], [0.2, 0.8]]})
    m = fblab.analyze(bsc2, code)
    assert abs(m["eps_max"] - 0.104) < 1e-9
    assert m["identity_resid"] < 1e-9


def test_generate_and_selftest_determinism():
    gen = fblab.generate_code("sphere", 16, 8, 1.0, seed=3)
    for row in gen["words"]:
        assert abs(sum(v * v for v in row) - 16.0) < 1e-9
    a = fblab.selftest_payload(seed=5, threads=1)
    b = fblab.selftest_payload(seed=5, threads=3)
    assert a == b
