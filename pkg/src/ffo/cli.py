"""Scenario runner: ``ffo <mode> --config <path> [flags]``.

Modes
-----
* ``evolve``             state evolution through the propagator
* ``invariants``         coefficient system + constants + oracle comparison
* ``reduce``             epsilon route + closure checks
* ``coherence``          temporal-stability measurement of the canonical CS
* ``phases``             Lewis-Riesenfeld phase trajectory
* ``grassmann-selftest`` algebra + Berezin + completeness checks
* ``all``                everything applicable to the configured spec

The configuration is a strict JSON document (unknown keys are rejected,
with the offending path in the diagnostic); command-line flags override
config fields.  CSV output is UTF-8 with a header row and full
round-trip precision; the JSON report carries ``schema: 1`` and is
byte-deterministic for a given config (wall time goes to the console
only).  Exit code 0 means every check passed, 1 means a check failed
(report still written), 2 means a config or runtime error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra import ladder_operators
from .config import DEFAULT_TOL
from .errors import ConfigError, FfoError
from .grassmann import (ZETA, ZETA_STAR, coherent_ket, completeness_check,
                        g_mul, apply_fermion_op)
from .grid import time_grid
from .invariants import (NuTrajectory, build_B_array, integrate_nu,
                         invariance_residual_max)
from .propagator import PropagatorConfig, evolve_state, evolve_unitary
from .reduction import integrate_epsilon, lambda2_from_epsilon, nu_from_epsilon_arrays
from .signals import (ComplexSignal, Constant, HamiltonianSpec, Polynomial,
                      Signal, Sinusoid, Tabulated)
from .states import (coherence_check, lr_phases, schrodinger_residual_max,
                     vacuum_trajectory)
from .sweeps import random_spec

# default check tolerances; overridable per run via run.tolerances
CHECK_TOLERANCES = {
    "lambda1_drift": 1e-7,
    "lambda2_drift": 1e-7,
    "oracle_deviation": 1e-6,
    "invariance_residual": 1e-5,
    "unitarity_drift": 1e-9,
    "norm_drift": 1e-8,
    "coherence_eigen": 1e-7,
    "zeta_ratio": 1e-8,
    "forcing_witness": 1e-3,
    "closure": 1e-5,
    "lambda1_epsilon": 1e-12,
    "lambda2_pair": 1e-10,
    "phase_consistency": 1e-5,
    "schrodinger": 1e-5,
    "completeness": 1e-14,
    "algebraic": 1e-12,
}

MODES = ("evolve", "invariants", "reduce", "coherence", "phases",
         "grassmann-selftest", "all")

# the check a bare --tol flag overrides, per mode
PRIMARY_CHECK = {
    "evolve": "norm_drift",
    "invariants": "oracle_deviation",
    "reduce": "closure",
    "coherence": "coherence_eigen",
    "phases": "phase_consistency",
    "grassmann-selftest": "completeness",
}


# -- configuration ------------------------------------------------------------

_SIGNAL_KEYS = {
    "constant": {"value"},
    "sinusoid": {"amplitude", "frequency", "phase", "offset"},
    "polynomial": {"coeffs"},
    "tabulated": {"times", "values"},
}


def _parse_signal(node, path: str) -> Signal:
    if not isinstance(node, dict):
        raise ConfigError(path, "signal descriptor must be an object")
    kind = node.get("type")
    if kind not in _SIGNAL_KEYS:
        raise ConfigError(f"{path}.type", f"unknown signal type {kind!r}")
    extra = set(node) - _SIGNAL_KEYS[kind] - {"type"}
    if extra:
        raise ConfigError(f"{path}.{sorted(extra)[0]}", "unknown key")
    try:
        if kind == "constant":
            return Constant(float(node.get("value", 0.0)))
        if kind == "sinusoid":
            return Sinusoid(amplitude=float(node.get("amplitude", 1.0)),
                            frequency=float(node.get("frequency", 1.0)),
                            phase=float(node.get("phase", 0.0)),
                            offset=float(node.get("offset", 0.0)))
        if kind == "polynomial":
            return Polynomial(tuple(float(c) for c in node.get("coeffs", [0.0])))
        return Tabulated(tuple(float(x) for x in node.get("times", [])),
                         tuple(float(x) for x in node.get("values", [])))
    except (TypeError, ValueError) as exc:
        raise ConfigError(path, str(exc)) from None


def _parse_complex_pair(node, path: str) -> complex:
    if not (isinstance(node, (list, tuple)) and len(node) == 2):
        raise ConfigError(path, "expected [re, im]")
    try:
        return complex(float(node[0]), float(node[1]))
    except (TypeError, ValueError):
        raise ConfigError(path, "expected numeric [re, im]") from None


@dataclass
class ScenarioConfig:
    spec: HamiltonianSpec
    mode: str = "invariants"
    t_final: float = 10.0
    dt: float = 1e-3
    tolerances: dict = field(default_factory=dict)
    nu0: tuple = (1.0 + 0j, 0j, 0j)
    epsilon0: tuple = (1.0 + 0j, 0.3j)
    state0: tuple = (1.0 + 0j, 0j)
    out_format: str = "csv"
    out_path: str | None = None
    fields: list | None = None

    def validate(self):
        if self.dt <= 0:
            raise ConfigError("run.dt", "must be positive")
        if self.t_final < self.dt:
            raise ConfigError("run.t_final", "must be at least run.dt")
        if self.mode not in MODES:
            raise ConfigError("run.mode", f"unknown mode {self.mode!r}")
        if self.out_format not in ("csv", "json"):
            raise ConfigError("output.format", f"unknown format {self.out_format!r}")
        for name in self.tolerances:
            if name not in CHECK_TOLERANCES:
                raise ConfigError(f"run.tolerances.{name}", "unknown tolerance name")


def _check_keys(node, allowed, path):
    extra = set(node) - set(allowed)
    if extra:
        raise ConfigError(f"{path}.{sorted(extra)[0]}", "unknown key")


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a scenario document (strict JSON schema)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<document>", f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("<document>", "top level must be an object")
    _check_keys(doc, {"hamiltonian", "run", "initial", "output"}, "<document>")

    ham = doc.get("hamiltonian", {})
    _check_keys(ham, {"omega", "f_re", "f_im", "g"}, "hamiltonian")
    spec = HamiltonianSpec(
        omega=_parse_signal(ham.get("omega", {"type": "constant", "value": 1.0}),
                            "hamiltonian.omega"),
        f=ComplexSignal(
            _parse_signal(ham.get("f_re", {"type": "constant", "value": 0.0}),
                          "hamiltonian.f_re"),
            _parse_signal(ham.get("f_im", {"type": "constant", "value": 0.0}),
                          "hamiltonian.f_im")),
        g=_parse_signal(ham.get("g", {"type": "constant", "value": 0.0}),
                        "hamiltonian.g"),
    )

    cfg = ScenarioConfig(spec=spec)
    run = doc.get("run", {})
    _check_keys(run, {"mode", "t_final", "dt", "tolerances"}, "run")
    if "mode" in run:
        cfg.mode = str(run["mode"])
    if "t_final" in run:
        cfg.t_final = float(run["t_final"])
    if "dt" in run:
        cfg.dt = float(run["dt"])
    tols = run.get("tolerances", {})
    if not isinstance(tols, dict):
        raise ConfigError("run.tolerances", "must be an object")
    cfg.tolerances = {str(k): float(v) for k, v in tols.items()}

    init = doc.get("initial", {})
    _check_keys(init, {"nu0", "epsilon0", "state"}, "initial")
    if "nu0" in init:
        node = init["nu0"]
        if not (isinstance(node, list) and len(node) == 3):
            raise ConfigError("initial.nu0", "expected three [re, im] pairs")
        cfg.nu0 = tuple(_parse_complex_pair(p, f"initial.nu0[{i}]")
                        for i, p in enumerate(node))
    if "epsilon0" in init:
        node = init["epsilon0"]
        if not (isinstance(node, list) and len(node) == 2):
            raise ConfigError("initial.epsilon0", "expected two [re, im] pairs")
        cfg.epsilon0 = tuple(_parse_complex_pair(p, f"initial.epsilon0[{i}]")
                             for i, p in enumerate(node))
    if "state" in init:
        node = init["state"]
        if not (isinstance(node, list) and len(node) == 2):
            raise ConfigError("initial.state", "expected two [re, im] pairs")
        cfg.state0 = tuple(_parse_complex_pair(p, f"initial.state[{i}]")
                           for i, p in enumerate(node))

    out = doc.get("output", {})
    _check_keys(out, {"format", "path", "fields"}, "output")
    if "format" in out:
        cfg.out_format = str(out["format"])
    if "path" in out:
        cfg.out_path = str(out["path"])
    if "fields" in out:
        if not isinstance(out["fields"], list):
            raise ConfigError("output.fields", "must be a list of column names")
        cfg.fields = [str(x) for x in out["fields"]]

    cfg.validate()
    return cfg


def serialize_config(cfg: ScenarioConfig) -> str:
    """Round-trip a parsed config back to canonical JSON (for tests)."""

    def sig(s: Signal):
        if isinstance(s, Constant):
            return {"type": "constant", "value": s.c}
        if isinstance(s, Sinusoid):
            return {"type": "sinusoid", "amplitude": s.amplitude,
                    "frequency": s.frequency, "phase": s.phase, "offset": s.offset}
        if isinstance(s, Polynomial):
            return {"type": "polynomial", "coeffs": list(s.coeffs)}
        if isinstance(s, Tabulated):
            return {"type": "tabulated", "times": list(s.times), "values": list(s.values)}
        raise TypeError(f"unserializable signal {s!r}")

    def pair(z: complex):
        return [z.real, z.imag]

    doc = {
        "hamiltonian": {"omega": sig(cfg.spec.omega), "f_re": sig(cfg.spec.f.re),
                        "f_im": sig(cfg.spec.f.im), "g": sig(cfg.spec.g)},
        "run": {"mode": cfg.mode, "t_final": cfg.t_final, "dt": cfg.dt,
                "tolerances": dict(sorted(cfg.tolerances.items()))},
        "initial": {"nu0": [pair(z) for z in cfg.nu0],
                    "epsilon0": [pair(z) for z in cfg.epsilon0],
                    "state": [pair(z) for z in cfg.state0]},
        "output": {"format": cfg.out_format,
                   **({"path": cfg.out_path} if cfg.out_path else {}),
                   **({"fields": cfg.fields} if cfg.fields else {})},
    }
    return json.dumps(doc, indent=2, sort_keys=True)


# -- reports and emission -------------------------------------------------------

@dataclass
class RunReport:
    mode: str
    grid: dict
    drifts: dict
    checks: list            # [{"name", "value", "tolerance", "passed"}]
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def to_json_obj(self) -> dict:
        # wall time deliberately excluded: report files are byte-deterministic
        return {"schema": 1, "mode": self.mode, "grid": self.grid,
                "drifts": self.drifts, "checks": self.checks,
                "passed": self.passed}


def _fmt(x) -> str:
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def emit_csv(path: str, header: list, columns: list) -> None:
    """Write columns (parallel 1-d arrays) as CSV; atomic replace."""
    rows = len(columns[0])
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for i in range(rows):
                fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_json(path: str, report: RunReport) -> None:
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)) or ".",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(report.to_json_obj(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _table_select(cfg: ScenarioConfig, header: list, columns: list):
    if not cfg.fields:
        return header, columns
    missing = [f for f in cfg.fields if f not in header]
    if missing:
        raise ConfigError("output.fields", f"unknown column {missing[0]!r}")
    idx = [header.index(f) for f in cfg.fields]
    return [header[i] for i in idx], [columns[i] for i in idx]


# -- mode implementations --------------------------------------------------------

def _tols(cfg: ScenarioConfig) -> dict:
    out = dict(CHECK_TOLERANCES)
    out.update(cfg.tolerances)
    return out


def _check(checks: list, name: str, value: float, tolerance: float, invert=False):
    passed = (value >= tolerance) if invert else (value <= tolerance)
    checks.append({"name": name, "value": float(value),
                   "tolerance": float(tolerance), "passed": bool(passed)})


def _spec_is_free(cfg: ScenarioConfig) -> bool:
    probe = np.linspace(0.0, cfg.t_final, 65)
    return float(np.max(np.abs(cfg.spec.f.value(probe)))) <= DEFAULT_TOL.f_min


def _run_evolve(cfg: ScenarioConfig, tols: dict):
    times, psi = evolve_state(cfg.spec, np.array(cfg.state0), cfg.t_final,
                              PropagatorConfig(dt=cfg.dt))
    traj = evolve_unitary(cfg.spec, cfg.t_final, PropagatorConfig(dt=cfg.dt))
    unit = np.max(np.abs(np.conj(np.transpose(traj.U, (0, 2, 1))) @ traj.U - np.eye(2)))
    norms = np.linalg.norm(psi, axis=1)
    checks: list = []
    _check(checks, "unitarity_drift", float(unit), tols["unitarity_drift"])
    _check(checks, "norm_drift", float(np.max(np.abs(norms - norms[0]))), tols["norm_drift"])
    header = ["t", "re_amp0", "im_amp0", "re_amp1", "im_amp1", "norm"]
    cols = [times, psi[:, 0].real, psi[:, 0].imag, psi[:, 1].real, psi[:, 1].imag, norms]
    drifts = {c["name"]: c["value"] for c in checks}
    return header, cols, drifts, checks


def _run_invariants(cfg: ScenarioConfig, tols: dict):
    traj = integrate_nu(cfg.spec, cfg.nu0, cfg.t_final, PropagatorConfig(dt=cfg.dt))
    u = evolve_unitary(cfg.spec, cfg.t_final, PropagatorConfig(dt=cfg.dt, method="rk4"))
    b0 = build_B_array(np.tile(np.asarray(cfg.nu0, dtype=complex), (len(traj.times), 1)))
    oracle = u.U @ b0 @ np.conj(np.transpose(u.U, (0, 2, 1)))
    dev = np.max(np.abs(build_B_array(traj.nu) - oracle), axis=(1, 2))
    lam1_drift = np.abs(traj.lambda1 - traj.lambda1[0])
    lam2_drift = np.abs(traj.lambda2 - traj.lambda2[0])
    inv_res = invariance_residual_max(cfg.spec, traj)
    checks: list = []
    _check(checks, "lambda1_drift", float(np.max(lam1_drift)), tols["lambda1_drift"])
    _check(checks, "lambda2_drift", float(np.max(lam2_drift)), tols["lambda2_drift"])
    _check(checks, "oracle_deviation", float(np.max(dev)), tols["oracle_deviation"])
    _check(checks, "invariance_residual", float(inv_res), tols["invariance_residual"])
    header = ["t", "re_nu_minus", "im_nu_minus", "re_nu_plus", "im_nu_plus",
              "re_nu_3", "im_nu_3", "abs_lambda1", "lambda2", "oracle_dev"]
    n = traj.nu
    cols = [traj.times, n[:, 0].real, n[:, 0].imag, n[:, 1].real, n[:, 1].imag,
            n[:, 2].real, n[:, 2].imag, np.abs(traj.lambda1), traj.lambda2, dev]
    drifts = {c["name"]: c["value"] for c in checks}
    return header, cols, drifts, checks


def _run_reduce(cfg: ScenarioConfig, tols: dict):
    et = integrate_epsilon(cfg.spec, cfg.epsilon0, cfg.t_final, PropagatorConfig(dt=cfg.dt))
    nus = nu_from_epsilon_arrays(cfg.spec, et.times, et.eps, et.eps_dot)
    lam1 = np.abs(nus[:, 1] * nus[:, 0] + 0.25 * nus[:, 2] ** 2)
    lam2_nu = (np.abs(nus[:, 0]) ** 2 + np.abs(nus[:, 1]) ** 2
               + 0.5 * np.abs(nus[:, 2]) ** 2).real
    lam2_eps = np.array([lambda2_from_epsilon(cfg.spec, float(t), et.at(k))
                         for k, t in enumerate(et.times)])
    direct = integrate_nu(cfg.spec, tuple(nus[0]), cfg.t_final, PropagatorConfig(dt=cfg.dt))
    closure = np.max(np.abs(direct.nu - nus), axis=1)
    checks: list = []
    _check(checks, "lambda1_epsilon", float(np.max(lam1)), tols["lambda1_epsilon"])
    _check(checks, "lambda2_drift", float(np.max(np.abs(lam2_nu - lam2_nu[0]))),
           tols["lambda2_drift"])
    _check(checks, "lambda2_pair", float(np.max(np.abs(lam2_nu - lam2_eps))),
           tols["lambda2_pair"])
    _check(checks, "closure", float(np.max(closure)), tols["closure"])
    header = ["t", "re_eps", "im_eps", "re_eps_dot", "im_eps_dot",
              "re_nu_minus", "im_nu_minus", "re_nu_plus", "im_nu_plus",
              "re_nu_3", "im_nu_3", "abs_lambda1", "lambda2", "closure_dev"]
    cols = [et.times, et.eps.real, et.eps.imag, et.eps_dot.real, et.eps_dot.imag,
            nus[:, 0].real, nus[:, 0].imag, nus[:, 1].real, nus[:, 1].imag,
            nus[:, 2].real, nus[:, 2].imag, lam1, lam2_nu, closure]
    drifts = {c["name"]: c["value"] for c in checks}
    return header, cols, drifts, checks


def _run_coherence(cfg: ScenarioConfig, tols: dict):
    rep = coherence_check(cfg.spec, cfg.t_final, PropagatorConfig(dt=cfg.dt))
    checks: list = []
    if _spec_is_free(cfg):
        _check(checks, "coherence_eigen", float(np.max(rep.eigen_residual)),
               tols["coherence_eigen"])
        ratio_dev = np.max(np.abs(rep.zeta_ratio - np.conj(rep.beta)))
        _check(checks, "zeta_ratio", float(ratio_dev), tols["zeta_ratio"])
    else:
        _check(checks, "forcing_witness", float(np.max(rep.eigen_residual)),
               tols["forcing_witness"], invert=True)
    header = ["t", "eigen_residual", "re_zeta_ratio", "im_zeta_ratio",
              "re_beta", "im_beta"]
    cols = [rep.times, rep.eigen_residual, rep.zeta_ratio.real, rep.zeta_ratio.imag,
            rep.beta.real, rep.beta.imag]
    drifts = {c["name"]: c["value"] for c in checks}
    return header, cols, drifts, checks


def _run_phases(cfg: ScenarioConfig, tols: dict):
    traj = integrate_nu(cfg.spec, cfg.nu0, cfg.t_final, PropagatorConfig(dt=cfg.dt))
    ph = lr_phases(traj, cfg.spec)
    psi0 = np.exp(1j * ph.phi0)[:, None] * ph.frame.e0
    psi1 = np.exp(1j * ph.phi1)[:, None] * ph.frame.e1
    res = max(schrodinger_residual_max(cfg.spec, traj.times, psi0),
              schrodinger_residual_max(cfg.spec, traj.times, psi1))
    vac, _ = vacuum_trajectory(traj, cfg.spec)
    vres = schrodinger_residual_max(cfg.spec, traj.times, vac)
    checks: list = []
    _check(checks, "phase_consistency", ph.consistency_residual, tols["phase_consistency"])
    _check(checks, "schrodinger", float(max(res, vres)), tols["schrodinger"])
    header = ["t", "phi0", "phi1", "phi_geometric", "phi_dynamical"]
    cols = [traj.times, ph.phi0, ph.phi1, ph.phi_geometric, ph.phi_dynamical]
    drifts = {c["name"]: c["value"] for c in checks}
    return header, cols, drifts, checks


def _run_grassmann(cfg: ScenarioConfig, tols: dict):
    from .grassmann import GrassmannElement

    checks: list = []
    _check(checks, "completeness", completeness_check(), tols["completeness"])
    _check(checks, "completeness_flip_detector", completeness_check(commuting=True),
           1.0, invert=True)
    ket = coherent_ket(1.0)
    eig = (apply_fermion_op("b", ket) - ket.left_mul(ZETA)).max_abs()
    _check(checks, "cs_eigenvalue", eig, tols["algebraic"])
    beres = abs(g_mul(ZETA, ZETA_STAR).berezin() - 1.0)
    _check(checks, "berezin_top", beres, tols["algebraic"])
    assoc = 0.0
    rng = np.random.default_rng(0)
    for _ in range(16):
        x, y, z = (GrassmannElement(rng.normal(size=4) + 1j * rng.normal(size=4))
                   for _ in range(3))
        assoc = max(assoc, (g_mul(g_mul(x, y), z) - g_mul(x, g_mul(y, z))).max_abs())
    _check(checks, "associativity", assoc, tols["algebraic"])
    header = ["check", "value", "tolerance", "passed"]
    cols = [[c["name"] for c in checks], [c["value"] for c in checks],
            [c["tolerance"] for c in checks], [c["passed"] for c in checks]]
    drifts = {c["name"]: c["value"] for c in checks}
    return header, cols, drifts, checks


_MODE_RUNNERS = {
    "evolve": _run_evolve,
    "invariants": _run_invariants,
    "reduce": _run_reduce,
    "coherence": _run_coherence,
    "phases": _run_phases,
    "grassmann-selftest": _run_grassmann,
}


def run(mode: str, cfg: ScenarioConfig) -> tuple[RunReport, dict]:
    """Execute one scenario; returns (report, {name: (header, columns)})."""
    cfg.validate()
    tols = _tols(cfg)
    t0 = time.perf_counter()
    tables: dict = {}
    checks: list = []
    drifts: dict = {}
    submodes = [mode]
    if mode == "all":
        submodes = ["grassmann-selftest", "invariants", "coherence", "phases"]
        if not _spec_is_free(cfg):
            probe = np.linspace(0.0, cfg.t_final, 65)
            if float(np.min(np.abs(cfg.spec.f.value(probe)))) >= 0.1:
                submodes.append("reduce")
    for sub in submodes:
        header, cols, d, c = _MODE_RUNNERS[sub](cfg, tols)
        prefix = "" if mode != "all" else sub + "."
        tables[sub] = (header, cols)
        drifts.update({prefix + k: v for k, v in d.items()})
        for item in c:
            item = dict(item)
            item["name"] = prefix + item["name"]
            checks.append(item)
    grid = {"t_final": cfg.t_final, "dt": cfg.dt,
            "points": len(time_grid(cfg.t_final, cfg.dt))}
    report = RunReport(mode=mode, grid=grid, drifts=drifts, checks=checks,
                       wall_time_s=time.perf_counter() - t0)
    return report, tables


def _output_paths(base: str | None, fmt: str, index: int | None = None):
    if base is None:
        return None
    root, ext = os.path.splitext(base)
    if not ext:
        ext = ".csv" if fmt == "csv" else ".json"
    if index is None:
        return root + ext
    return f"{root}-{index:03d}{ext}"


def _emit(cfg: ScenarioConfig, report: RunReport, tables: dict, path: str | None):
    if path is None:
        return
    if cfg.out_format == "json":
        emit_json(path, report)
        return
    # csv: single-mode runs emit their table; "all" emits the invariants table
    key = report.mode if report.mode != "all" else "invariants"
    header, cols = tables[key]
    header, cols = _table_select(cfg, header, cols)
    emit_csv(path, header, cols)


def _sweep_config(base: ScenarioConfig, rng: np.random.Generator, mode: str) -> ScenarioConfig:
    spec = random_spec(rng, f_zero=(mode == "coherence" and rng.uniform() < 0.5),
                       f_floor=(mode == "reduce"))
    out = ScenarioConfig(spec=spec, mode=mode, t_final=base.t_final, dt=base.dt,
                         tolerances=dict(base.tolerances), nu0=base.nu0,
                         epsilon0=base.epsilon0, state0=base.state0,
                         out_format=base.out_format)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ffo",
        description="Forced fermion oscillator: invariants, states and checks.")
    parser.add_argument("mode", choices=MODES)
    parser.add_argument("--config", help="scenario JSON document")
    parser.add_argument("--dt", type=float, help="override run.dt")
    parser.add_argument("--t-final", type=float, help="override run.t_final")
    parser.add_argument("--tol", type=float,
                        help="override the mode's primary check tolerance")
    parser.add_argument("--sweep", type=int, metavar="N",
                        help="run N random bounded scenarios instead of the configured one")
    parser.add_argument("--seed", type=int, default=0, help="sweep seed")
    parser.add_argument("--out", help="output file (CSV table or JSON report)")
    parser.add_argument("--format", choices=("csv", "json"), dest="fmt")
    args = parser.parse_args(argv)

    try:
        if args.config:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        else:
            if args.mode not in ("grassmann-selftest",) and not args.sweep:
                print("error: --config is required for this mode", file=sys.stderr)
                return 2
            cfg = ScenarioConfig(spec=HamiltonianSpec(
                omega=Constant(1.0), f=ComplexSignal(Constant(0.0)), g=Constant(0.0)))
        cfg.mode = args.mode
        if args.dt is not None:
            cfg.dt = args.dt
        if args.t_final is not None:
            cfg.t_final = args.t_final
        if args.fmt is not None:
            cfg.out_format = args.fmt
        if args.out is not None:
            cfg.out_path = args.out
        if args.tol is not None and args.mode in PRIMARY_CHECK:
            cfg.tolerances[PRIMARY_CHECK[args.mode]] = args.tol
        cfg.validate()

        if args.sweep:
            rng = np.random.default_rng(args.seed)
            mode = args.mode if args.mode != "all" else "invariants"
            scenarios = [_sweep_config(cfg, rng, mode) for _ in range(args.sweep)]
            with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
                results = list(pool.map(lambda c: run(mode, c), scenarios))
            ok = True
            for i, (rep, tables) in enumerate(results):
                path = _output_paths(cfg.out_path, cfg.out_format, i)
                _emit(scenarios[i], rep, tables, path)
                status = "pass" if rep.passed else "FAIL"
                print(f"scenario {i:03d}: {status} "
                      + " ".join(f"{c['name']}={c['value']:.3e}" for c in rep.checks))
                ok = ok and rep.passed
            print(f"sweep: {len(results)} scenarios, "
                  f"{'all passed' if ok else 'FAILURES PRESENT'}")
            return 0 if ok else 1

        report, tables = run(args.mode, cfg)
        _emit(cfg, report, tables, _output_paths(cfg.out_path, cfg.out_format))
        for c in report.checks:
            status = "pass" if c["passed"] else "FAIL"
            print(f"[{status}] {c['name']}: value={c['value']:.6e} tol={c['tolerance']:.1e}")
        print(f"mode={report.mode} points={report.grid['points']} "
              f"wall={report.wall_time_s:.2f}s "
              f"=> {'PASS' if report.passed else 'FAIL'}")
        return 0 if report.passed else 1
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (FfoError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
