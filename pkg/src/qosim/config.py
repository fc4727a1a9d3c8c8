"""Scenario configuration files.

A scenario is a JSON document with the top-level keys

    lattice  {L, n}
    photon   {r0, k0, var_kx, var_ky, covar}          (optional)
    elements [ tagged records, see below ]
    run      {dt, t_end, snapshot_every}              (dt optional)
    outputs  {energy_density, mode_probs, atom_excitation, angular_intensity}

Element tags: slab_mirror, beam_splitter, parabola, two_slit, analyzer_array,
interferometer, atom.  An ``atom`` record may set ``"excited": true`` to start
the run with the excitation on that atom instead of in a photon packet.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from . import scene as sc
from .lattice import ModeLattice, build_lattice
from .state import GaussianSpec


class ConfigError(ValueError):
    """A scenario file is malformed; the message names the offending field."""


def _need(record: dict, key: str, where: str):
    if key not in record:
        raise ConfigError(f"{where}: missing required field '{key}'")
    return record[key]


def _pair(value, where: str) -> tuple[float, float]:
    try:
        x, y = value
        return float(x), float(y)
    except (TypeError, ValueError):
        raise ConfigError(f"{where}: expected a pair of numbers, got {value!r}")


@dataclass
class ScenarioConfig:
    name: str
    L: float
    n: int
    photon: GaussianSpec | None
    elements: list[dict]
    dt: float | None
    t_end: float
    snapshot_every: float
    outputs: dict = dc_field(default_factory=dict)

    def lattice(self) -> ModeLattice:
        return build_lattice(self.L, self.n)


def load_config(path) -> ScenarioConfig:
    """Parse and validate a scenario file."""
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as err:
        raise ConfigError(f"{path}: invalid JSON at line {err.lineno}, "
                          f"column {err.colno}: {err.msg}") from err
    except OSError as err:
        raise ConfigError(f"{path}: {err}") from err

    known = {"name", "lattice", "photon", "elements", "run", "outputs"}
    extra = set(raw) - known
    if extra:
        raise ConfigError(f"{path}: unknown top-level keys {sorted(extra)}")

    lat_rec = _need(raw, "lattice", "lattice")
    L = float(_need(lat_rec, "L", "lattice"))
    n = int(_need(lat_rec, "n", "lattice"))

    photon = None
    if raw.get("photon") is not None:
        p = raw["photon"]
        try:
            photon = GaussianSpec(
                r0=_pair(_need(p, "r0", "photon"), "photon.r0"),
                k0=_pair(_need(p, "k0", "photon"), "photon.k0"),
                var_kx=float(_need(p, "var_kx", "photon")),
                var_ky=float(_need(p, "var_ky", "photon")),
                covar_kxky=float(p.get("covar", 0.0)),
            )
        except ValueError as err:
            raise ConfigError(f"photon: {err}") from err

    elements = raw.get("elements", [])
    if not isinstance(elements, list):
        raise ConfigError("elements: expected a list of tagged records")
    for idx, rec in enumerate(elements):
        if "type" not in rec:
            raise ConfigError(f"elements[{idx}]: missing 'type' tag")

    run = _need(raw, "run", "run")
    dt = run.get("dt")
    cfg = ScenarioConfig(
        name=str(raw.get("name", "scenario")),
        L=L, n=n, photon=photon, elements=elements,
        dt=None if dt is None else float(dt),
        t_end=float(_need(run, "t_end", "run")),
        snapshot_every=float(_need(run, "snapshot_every", "run")),
        outputs=raw.get("outputs", {}),
    )
    if cfg.t_end <= 0 or cfg.snapshot_every <= 0:
        raise ConfigError("run: t_end and snapshot_every must be positive")
    if cfg.dt is not None and cfg.dt <= 0:
        raise ConfigError("run: dt must be positive")
    if photon is None and not any(r.get("excited") for r in elements
                                  if r.get("type") == "atom"):
        raise ConfigError("scenario has neither a photon nor an excited atom")
    return cfg


def build_elements(cfg: ScenarioConfig, lat: ModeLattice):
    """Assemble the scene; returns (scene, indices of initially excited atoms)."""
    scene = sc.Scene.empty(lat)
    excited: list[int] = []
    for idx, rec in enumerate(cfg.elements):
        where = f"elements[{idx}]"
        tag = rec["type"]
        try:
            if tag == "slab_mirror":
                part = sc.build_slab_mirror(
                    lat, _pair(_need(rec, "center", where), where),
                    float(_need(rec, "angle", where)),
                    float(_need(rec, "length", where)),
                    int(rec.get("layers", 8)),
                    float(_need(rec, "omega", where)),
                    complex(_need(rec, "D", where)))
            elif tag == "beam_splitter":
                part = sc.build_beam_splitter(
                    lat, _pair(_need(rec, "center", where), where),
                    float(_need(rec, "angle", where)),
                    float(_need(rec, "length", where)),
                    float(_need(rec, "omega", where)),
                    complex(_need(rec, "D", where)))
            elif tag == "parabola":
                part = sc.build_parabola(
                    lat, float(_need(rec, "x0", where)),
                    float(_need(rec, "p", where)),
                    float(_need(rec, "y_extent", where)),
                    int(rec.get("layers", 8)),
                    float(_need(rec, "omega", where)),
                    complex(_need(rec, "D", where)))
            elif tag == "two_slit":
                part = sc.build_two_slit(
                    lat, float(_need(rec, "x_pos", where)),
                    float(_need(rec, "slit_width", where)),
                    float(_need(rec, "separation", where)),
                    float(_need(rec, "omega", where)),
                    complex(_need(rec, "D", where)),
                    int(rec.get("layers", 8)))
            elif tag == "analyzer_array":
                spec = sc.AnalyzerArray(
                    omega_min=float(_need(rec, "omega_min", where)),
                    omega_max=float(_need(rec, "omega_max", where)),
                    count=int(_need(rec, "count", where)),
                    C=float(rec.get("C", 1e-4)),
                    positions=[_pair(p, where)
                               for p in _need(rec, "positions", where)])
                part = sc.build_analyzer_array(lat, spec)
            elif tag == "interferometer":
                kwargs = {k: rec[k] for k in
                          ("arm_length", "bs_length", "mirror_length",
                           "mirror_layers", "bs_omega", "mirror_omega", "D")
                          if k in rec}
                part = sc.build_interferometer(
                    lat, float(_need(rec, "arm_difference", where)), **kwargs)
            elif tag == "atom":
                part = sc.Scene(lat, [sc.Atom(
                    _pair(_need(rec, "pos", where), where),
                    float(_need(rec, "omega", where)),
                    complex(_need(rec, "D", where)))])
                if rec.get("excited"):
                    excited.append(len(scene))
            else:
                raise ConfigError(f"{where}: unknown element type '{tag}'")
        except ConfigError:
            raise
        except (ValueError, TypeError) as err:
            raise ConfigError(f"{where} ({tag}): {err}") from err
        scene = scene + part
    return scene, excited
