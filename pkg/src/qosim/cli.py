"""Command-line front end.

    qosim run CONFIG --out DIR      execute a scenario and write outputs
    qosim check CONFIG              validate a scenario without running it
    qosim oracle SUB ...            evaluate the independent cross-checks

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import observables as obs
from .config import ConfigError, ScenarioConfig, build_elements, load_config
from .dynamics import (NumericalFailure, apply_hamiltonian,
                       rk4_step_arrays, simulate, stable_dt)
from .io import CsvWriter, write_field_snapshot, write_pgm, write_profile_csv
from .lattice import build_lattice
from .scene import KIND_ELEMENT
from .state import StateVector, make_gaussian_photon

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3


def _initial_state(cfg: ScenarioConfig, lat, scene, excited):
    if cfg.photon is not None:
        state = make_gaussian_photon(lat, cfg.photon, n_atoms=len(scene))
        if excited:
            raise ConfigError("a scenario may start with a photon or excited "
                              "atoms, not both")
        return state
    atoms = np.zeros(len(scene), dtype=complex)
    atoms[excited] = 1.0 / np.sqrt(len(excited))
    field = np.zeros((lat.n, lat.n), dtype=complex)
    return StateVector(field=field, atoms=atoms)


def _sha256(path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def cmd_run(config_path, out_dir, dt=None, t_end=None, snapshot_every=None,
            log_scale=False, halve_dt_check=False) -> dict:
    """Execute a scenario, writing snapshots, series and a run manifest."""
    cfg = load_config(config_path)
    if dt is not None:
        cfg.dt = dt
    if t_end is not None:
        cfg.t_end = t_end
    if snapshot_every is not None:
        cfg.snapshot_every = snapshot_every

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    lat = cfg.lattice()
    scene, excited = build_elements(cfg, lat)
    state0 = _initial_state(cfg, lat, scene, excited)
    step = cfg.dt if cfg.dt is not None else stable_dt(lat, scene)

    outputs = cfg.outputs
    dens_cfg = outputs.get("energy_density", False)
    want_density = bool(dens_cfg)
    log_scale = log_scale or (isinstance(dens_cfg, dict)
                              and dens_cfg.get("log_scale", False))
    want_modes = bool(outputs.get("mode_probs", False))
    want_atoms = bool(outputs.get("atom_excitation", False)) and len(scene) > 0
    angular = outputs.get("angular_intensity")

    manifest = {
        "config": str(config_path),
        "config_sha256": _sha256(config_path),
        "lattice": {"L": lat.L, "n": lat.n},
        "atom_count": len(scene),
        "dt": step,
        "steps": int(np.ceil(cfg.t_end / step - 1e-9)),
        "status": "running",
        "outputs": [],
    }
    files = manifest["outputs"]

    diag_path = out / "diagnostics.csv"
    diag = CsvWriter(diag_path, ["t", "norm", "E_total", "E_field",
                                 "E_atoms", "E_int"])
    files.append(diag_path.name)
    atoms_csv = None
    if want_atoms:
        atoms_path = out / "atom_excitation.csv"
        atoms_csv = CsvWriter(atoms_path, ["t", "P_elements", "P_analyzers",
                                           "P_max_atom"])
        files.append(atoms_path.name)

    t0 = time.perf_counter()
    max_norm_err = 0.0
    e_ref = None
    max_drift = 0.0
    times, p_exc = [], []
    last = None
    status = "ok"
    failure_step = None
    try:
        for snap in simulate(lat, scene, state0, step, cfg.t_end,
                             cfg.snapshot_every):
            last = snap
            max_norm_err = max(max_norm_err, abs(snap.norm - 1.0))
            if e_ref is None:
                e_ref = snap.e_total
            elif e_ref != 0:
                max_drift = max(max_drift, abs(snap.e_total - e_ref) / abs(e_ref))
            diag.row([snap.t, snap.norm, snap.e_total, snap.e_field,
                      snap.e_atoms, snap.e_int])
            if want_atoms:
                probs = obs.atom_excitations(snap.state)
                el = scene.kind == KIND_ELEMENT
                atoms_csv.row([snap.t, float(probs[el].sum()),
                               float(probs[~el].sum()),
                               float(probs.max(initial=0.0))])
                times.append(snap.t)
                p_exc.append(float(probs[excited].sum()) if excited
                             else float(probs.sum()))
            if want_density:
                e = obs.energy_density(snap.state, lat)
                stem = f"energy_{snap.t:08.3f}"
                write_field_snapshot(out / f"{stem}.qosn", e.total, snap.t)
                write_pgm(out / f"{stem}.pgm", e.total, log_scale=log_scale)
                files.extend([f"{stem}.qosn", f"{stem}.pgm"])
            if want_modes:
                stem = f"modes_{snap.t:08.3f}"
                probs2d = np.abs(snap.state.field) ** 2
                write_field_snapshot(out / f"{stem}.qosn", probs2d, snap.t)
                k, p = obs.mode_slice(snap.state, lat, "x",
                                      lat.index_of_mode(0, 0)[1])
                write_profile_csv(out / f"{stem}_kx.csv", {"kx": k, "prob": p})
                files.extend([f"{stem}.qosn", f"{stem}_kx.csv"])
    except NumericalFailure as err:
        status = "failed"
        failure_step = err.step
    finally:
        diag.close()
        if atoms_csv is not None:
            atoms_csv.close()

    if status == "ok" and angular and last is not None:
        e = obs.energy_density(last.state, lat)
        prof = obs.angular_intensity(
            e, lat, origin=tuple(angular.get("origin", (0.0, 0.0))),
            r_min=float(angular.get("r_min", 0.0)))
        write_profile_csv(out / "angular_intensity.csv",
                          {"theta": prof.theta, "intensity": prof.intensity})
        files.append("angular_intensity.csv")

    if status == "ok" and excited and len(times) >= 2:
        try:
            fit = obs.fit_decay(times, p_exc)
            manifest["decay_fit"] = {"gamma": fit.gamma, "window": fit.window,
                                     "residual": fit.residual}
        except ValueError:
            pass

    if halve_dt_check and status == "ok":
        ref = None
        for snap in simulate(lat, scene, state0, step / 2.0, cfg.t_end,
                             cfg.t_end):
            ref = snap
        diff = float(np.sqrt(
            np.sum(np.abs(ref.state.field - last.state.field) ** 2)
            + np.sum(np.abs(ref.state.atoms - last.state.atoms) ** 2)))
        manifest["halved_dt_state_diff"] = diff

    manifest.update({
        "status": status,
        "failure_step": failure_step,
        "wall_seconds": time.perf_counter() - t0,
        "max_norm_error": max_norm_err,
        "max_energy_drift": max_drift,
    })
    with open(out / "run_manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)
    return manifest


def cmd_check(config_path) -> dict:
    """Static validation of a scenario; returns a findings report."""
    findings = []
    report = {"config": str(config_path), "findings": findings}
    try:
        cfg = load_config(config_path)
    except ConfigError as err:
        findings.append({"level": "error", "message": str(err)})
        return report
    try:
        lat = cfg.lattice()
    except ValueError as err:
        findings.append({"level": "error", "message": f"lattice: {err}"})
        return report
    scene = None
    try:
        import warnings
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            scene, excited = build_elements(cfg, lat)
            for w in caught:
                findings.append({"level": "warning", "message": str(w.message)})
        report["atom_count"] = len(scene)
        report["element_counts"] = {
            rec["type"]: sum(1 for r in cfg.elements if r["type"] == rec["type"])
            for rec in cfg.elements}
    except (ConfigError, ValueError) as err:
        findings.append({"level": "error", "message": str(err)})

    if cfg.photon is not None:
        band = float(lat.kx.max())
        margin = 3.0 * np.sqrt(max(cfg.photon.var_kx, cfg.photon.var_ky))
        k0 = cfg.photon.k0
        if max(abs(k0[0]), abs(k0[1])) + margin > band:
            findings.append({
                "level": "warning",
                "message": f"photon k0={k0} is within 3 sigma of the "
                           f"representable band edge {band:g}"})

    if scene is not None:
        dt_max = stable_dt(lat, scene)
        report["suggested_dt"] = dt_max
        if cfg.dt is not None and cfg.dt > dt_max:
            findings.append({
                "level": "warning",
                "message": f"dt={cfg.dt:g} violates the stability budget "
                           f"dt*(omega_max + omega_atom) <= 0.1; "
                           f"suggest dt <= {dt_max:.3g}"})
        report["steps"] = int(np.ceil(
            cfg.t_end / (cfg.dt if cfg.dt else dt_max) - 1e-9))
    return report


# ----------------------------------------------------------------------
# oracle evaluations used by the test suite, exposed for inspection
# ----------------------------------------------------------------------

def oracle_two_slit(k: float, d: float, a: float, n_theta: int = 601,
                    theta_max: float = 1.2):
    theta = np.linspace(-theta_max, theta_max, n_theta)
    prof = obs.classical_two_slit(k, d, a, theta)
    return theta, prof.intensity


def oracle_rabi(coupling: float = 0.02, periods: float = 10.0,
                steps_per_unit: float | None = None):
    """Integrate the one-atom/one-mode reduction and compare to closed form.

    On resonance the excitation oscillates as |c_atom| = |sin(g t)|; the
    numerical column uses the same RK4 stepper as the full simulator at
    g*dt = 0.01.
    """
    g = complex(coupling)
    dt = 0.01 / abs(g)
    t_total = periods * 2.0 * np.pi / abs(g)
    n = int(np.ceil(t_total / dt))

    def rhs(f, a, t):
        return (-1j * np.conj(g) * a, -1j * g * f)

    f = np.array([1.0 + 0.0j])
    a = np.array([0.0 + 0.0j])
    ts, num, exact = [], [], []
    for i in range(n):
        f, a = rk4_step_arrays(f, a, i * dt, dt, rhs)
        t = (i + 1) * dt
        ts.append(t)
        num.append(abs(a[0]))
        exact.append(abs(np.sin(abs(g) * t)))
    err = float(np.max(np.abs(np.array(num) - np.array(exact))))
    return {"t": ts, "numeric": num, "exact": exact, "max_error": err}


def oracle_direct_sum(n: int = 8, n_atoms: int = 4, seed: int = 7):
    """Max deviation between the FFT derivative and the explicit double sum."""
    from .scene import Atom, Scene
    from .state import INTERACTION

    rng = np.random.default_rng(seed)
    lat = build_lattice(5.0, n)
    atoms = []
    for _ in range(n_atoms):
        pos = (rng.uniform(-2, 2), rng.uniform(-2, 2))
        atoms.append(Atom(pos, rng.uniform(1.0, 6.0),
                          complex(rng.normal(), rng.normal())))
    scene = Scene(lat, atoms)
    f = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a = rng.normal(size=len(scene)) + 1j * rng.normal(size=len(scene))
    nrm = np.sqrt(np.sum(np.abs(f) ** 2) + np.sum(np.abs(a) ** 2))
    st = StateVector(f / nrm, a / nrm, INTERACTION, t=0.37)

    df, da = apply_hamiltonian(st, scene, lat, t=st.t)
    df_ref, da_ref = direct_sum_derivative(st, scene, lat, st.t)
    scale = max(np.abs(df_ref).max(), np.abs(da_ref).max())
    return {
        "max_rel_error": float(max(np.abs(df - df_ref).max(),
                                   np.abs(da - da_ref).max()) / scale)}


def direct_sum_derivative(s, scene, lat, t):
    """Brute-force O(n_modes * n_atoms) evaluation of the coupled derivative."""
    u = lat.units
    kappa = 1.0 / (2.0 * u.epsilon0 * lat.L)
    n = lat.n
    d_field = np.zeros((n, n), dtype=complex)
    d_atoms = np.zeros(len(scene), dtype=complex)
    for j in range(len(scene)):
        wj = scene.omega[j]
        dj = scene.dipole[j]
        rx, ry = scene.pos[j]
        acc = 0.0 + 0.0j
        for ix in range(n):
            for iy in range(n):
                wk = lat.omega[ix, iy]
                ph = np.exp(1j * (lat.kx[ix] * rx + lat.ky[iy] * ry))
                acc += s.field[ix, iy] * np.exp(-1j * wk * t) * ph
                d_field[ix, iy] += (kappa * np.exp(1j * wk * t)
                                    * np.sqrt(wj) * np.conj(dj) * s.atoms[j]
                                    * np.exp(-1j * wj * t) * np.conj(ph))
        d_atoms[j] = -kappa * np.sqrt(wj) * dj * np.exp(1j * wj * t) * acc
    return d_field, d_atoms


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

def _build_parser():
    ap = argparse.ArgumentParser(prog="qosim",
                                 description="single-photon cavity simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a scenario")
    run.add_argument("config")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--dt", type=float, default=None)
    run.add_argument("--t-end", type=float, default=None)
    run.add_argument("--snapshot-every", type=float, default=None)
    run.add_argument("--log-scale", action="store_true",
                     help="log-scaled PGM rendering")
    run.add_argument("--halve-dt-check", action="store_true",
                     help="repeat the run at dt/2 and report the state change")

    chk = sub.add_parser("check", help="validate a scenario without running")
    chk.add_argument("config")

    orc = sub.add_parser("oracle", help="independent cross-checks")
    osub = orc.add_subparsers(dest="oracle", required=True)
    ots = osub.add_parser("two_slit")
    ots.add_argument("--k", type=float, required=True)
    ots.add_argument("--d", type=float, required=True)
    ots.add_argument("--a", type=float, required=True)
    ots.add_argument("--out", default=None, help="CSV output path")
    orb = osub.add_parser("rabi")
    orb.add_argument("--coupling", type=float, default=0.02)
    orb.add_argument("--periods", type=float, default=10.0)
    ods = osub.add_parser("direct_sum")
    ods.add_argument("--n", type=int, default=8)
    ods.add_argument("--atoms", type=int, default=4)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            manifest = cmd_run(args.config, args.out, dt=args.dt,
                               t_end=args.t_end,
                               snapshot_every=args.snapshot_every,
                               log_scale=args.log_scale,
                               halve_dt_check=args.halve_dt_check)
            print(json.dumps({k: manifest[k] for k in
                              ("status", "atom_count", "dt", "steps",
                               "max_norm_error", "max_energy_drift")},
                             indent=2))
            return EXIT_OK if manifest["status"] == "ok" else EXIT_NUMERICS
        if args.command == "check":
            report = cmd_check(args.config)
            print(json.dumps(report, indent=2))
            return EXIT_OK
        if args.command == "oracle":
            if args.oracle == "two_slit":
                theta, intensity = oracle_two_slit(args.k, args.d, args.a)
                if args.out:
                    write_profile_csv(args.out, {"theta": theta,
                                                 "intensity": intensity})
                    print(f"wrote {args.out}")
                else:
                    print(json.dumps({"theta_zero_intensity": 1.0,
                                      "n_points": len(theta)}))
            elif args.oracle == "rabi":
                rep = oracle_rabi(args.coupling, args.periods)
                print(json.dumps({"max_error": rep["max_error"]}))
            elif args.oracle == "direct_sum":
                rep = oracle_direct_sum(args.n, args.atoms)
                print(json.dumps(rep))
            return EXIT_OK
    except ConfigError as err:
        print(f"configuration error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
