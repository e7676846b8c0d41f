import json
import math

import numpy as np
import pytest

import holoqutrit as hq


def test_version():
    assert hq.__version__.count(".") == 2


def test_named_gate_round_trip():
    spec = hq.named_gate("H")
    u = hq.target_unitary(spec)
    r = 1 / math.sqrt(2)
    assert np.allclose(u, [[r, r], [r, -r]], atol=1e-12)
    back = hq.axis_angle(u)
    assert np.allclose(hq.target_unitary(back), u, atol=1e-10)


def test_synthesize_and_propagate():
    spec = hq.GateSpec(theta=math.pi / 2, phi=0.0, gamma=math.pi, eta=0.2)
    s = hq.synthesize(spec)
    assert s.peak_rabi() == pytest.approx(2 * math.pi * 1e4, rel=1e-3)
    u = hq.propagate(s)
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-9)
    assert hq.subspace_fidelity(u, hq.target_unitary(spec)) > 1 - 1e-6
    assert hq.leakage(u) < 1e-8


def test_invalid_spec_raises():
    with pytest.raises(ValueError):
        hq.GateSpec(theta=4.0, phi=0.0, gamma=math.pi, eta=0.2)


def test_qpt_exact():
    s = hq.synthesize(hq.named_gate("X"))
    r = hq.qpt(s)
    ideal = hq.unitary_chi(hq.target_unitary(hq.named_gate("X")))
    assert hq.process_fidelity(r["chi"], ideal) > 0.999


def test_fit_decay_exact():
    m = np.array([1, 2, 4, 8, 16, 32], dtype=float)
    f = 0.45 * 0.97**m + 0.5
    r = hq.fit_decay(m, f)
    assert r["p"] == pytest.approx(0.97, abs=1e-9)
    assert r["A"] == pytest.approx(0.45, abs=1e-9)


def test_rb_depolarizing():
    r = hq.run_rb(lengths=[1, 4, 8, 16], sequences=5, model="depolarizing", depolarizing=0.02, seed=3)
    assert r["p_ref"] == pytest.approx(0.98, abs=1e-6)


def test_run_experiment(tmp_path):
    cfg = {"kind": "synth", "gate": "T", "eta": 0.5}
    r = hq.run_experiment(json.dumps(cfg), tmp_path)
    assert r["converged"]
    for f in r["files"]:
        assert (tmp_path / f).read_text().startswith("## holoqutrit")
