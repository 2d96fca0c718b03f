import json
import math

import numpy as np
import pytest

import mhdsim as m


def equilibrium(n=16, mm=8):
    f0 = m.InterfaceField(n)
    u0 = m.BulkVector(m.Side.plasma, n, mm)
    h0 = m.BulkVector(m.Side.plasma, n, mm)
    h0[0] = m.BulkField(m.Side.plasma, n, mm, 1.0)
    current = m.SurfaceCurrent.constant(m.InterfaceField(n, 1.0), m.InterfaceField(n))
    params = m.InitParams()
    params.m = mm
    return m.init_state(f0, u0, h0, current, params), current, params


def test_interface_field_numpy_roundtrip():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((16, 16))
    g = m.InterfaceField(a)
    assert g.n == 16
    np.testing.assert_array_equal(g.array(), a)


def test_spectral_norms():
    n = 32
    x = 2 * np.pi * np.arange(n) / n
    g = m.InterfaceField(np.cos(x)[None, :].repeat(n, axis=0))
    # ||cos x1||_{H^1}^2 = 2 * 2pi^2 over the torus
    assert m.hs_norm(g, 1.0) == pytest.approx(math.sqrt(2.0) * math.sqrt(2.0) * math.pi, rel=1e-12)
    d = m.fourier_derivative(g, 1, 1)
    np.testing.assert_allclose(d.array(), -np.sin(x)[None, :].repeat(n, axis=0), atol=1e-12)


def test_equilibrium_recovery_and_step():
    st, current, params = equilibrium()
    maps = m.build_maps(st.f, st.f, st.c0, params.m)
    rec = m.recover_all(st, maps, current)
    assert m.max_abs(m.normal_component(rec.h, maps.minus)) < 1e-8
    lam, lam_min = m.stability_lambda(
        m.trace_on_interface(rec.h[0]),
        m.trace_on_interface(rec.h[1]),
        m.trace_on_interface(rec.hhat[0]),
        m.trace_on_interface(rec.hhat[1]),
    )
    assert lam_min == pytest.approx(1.0, abs=1e-10)

    ctx = m.DynamicsContext(current, st.f, c0=st.c0, m=params.m)
    nxt = m.rk4_step(st, 0.05, ctx)
    assert nxt.time == pytest.approx(0.05)
    assert m.max_abs(nxt.f) < 1e-9
    assert m.max_abs(nxt.theta) < 1e-9

    rec2 = m.recover_all(nxt, m.build_maps(nxt.f, nxt.f, nxt.c0, params.m), current)
    r = m.interface_residuals(nxt, rec2, maps)
    assert abs(r.pressure_balance) < 1e-8
    assert abs(r.kinematic) < 1e-8


def test_diagnostics_record_json():
    st, current, params = equilibrium()
    maps = m.build_maps(st.f, st.f, st.c0, params.m)
    rec = m.recover_all(st, maps, current)
    r = m.make_record(st, rec, maps, 3.0, 0.0, st.f)
    doc = json.loads(m.record_json(r))
    assert doc["lambda_min"] == pytest.approx(1.0, abs=1e-10)
    assert abs(doc["hN"]) < 1e-8


def test_snapshot_roundtrip(tmp_path):
    st, _, _ = equilibrium()
    st.time = 0.375
    path = str(tmp_path / "snap.bin")
    m.write_snapshot(path, st)
    back = m.read_snapshot(path)
    assert back.time == st.time
    np.testing.assert_array_equal(back.f.array(), st.f.array())
    np.testing.assert_array_equal(back.omega_star[2].array(), st.omega_star[2].array())


def test_picard_equilibrium_fixed_point():
    st, current, params = equilibrium()
    cfg = m.IterationConfig()
    cfg.T = 0.05
    cfg.samples = 2
    cfg.fstar = st.f
    ctx = m.DynamicsContext(current, st.f, c0=st.c0, m=params.m)
    traj, report = m.picard_solve(st, cfg, ctx)
    assert report.converged
    assert report.distances[-1] < 1e-9
    assert len(traj.states) == 3


def test_config_validation_errors():
    with pytest.raises(m.ValidationError):
        m.parse_config(json.dumps({"mode": "direct", "N": 31}))
    cfg = m.parse_config(json.dumps({"mode": "direct", "N": 16, "M": 8}))
    assert cfg.t_end == 1.0


def test_run_direct(tmp_path):
    cfg = m.parse_config(
        json.dumps(
            {
                "mode": "direct",
                "N": 16,
                "M": 8,
                "dt": 0.05,
                "t_end": 0.1,
                "scenario": {"name": "equilibrium"},
                "output_dir": str(tmp_path),
            }
        )
    )
    assert m.run(cfg) == m.exit_codes["ok"]
    assert (tmp_path / "diagnostics.jsonl").exists()
    assert (tmp_path / "snapshot_final.bin").exists()
