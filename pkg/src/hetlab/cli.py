"""Command-line front end: verify, sweep, converge, classical.

Exit codes: 0 all checks pass, 2 at least one identity failure,
1 configuration or IO error.  Every config-file field has a same-named
CLI flag override; reports are byte-deterministic apart from the single
elapsed_seconds field.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from . import report as report_mod
from .catalog import (MATRIX_FN, builtin_catalog, convergence_study,
                      run_catalog)
from .classical import (EmpConstants, OscillatorSpec, classical_phase,
                        coherent_expectations, emp_amplitude, hh8_diagnostic,
                        integrate_oscillator, load_profile_csv)
from .caves import k_expansion, s_operator, sn_commutator, unitarity_products
from .errors import HetlabError
from .fock import ToleranceConfig, TwoModeBasis, photon_projector
from .heterodyne import HeterodyneParams
from .rns import number_diff

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2

DEFAULT_K_GRID = (0.2, 0.1, 0.05, 0.02, 0.01, 0.005)


@dataclass
class RunConfig:
    mode: str
    da: int = 12
    db: int = 12
    A: float = 1.0
    B: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    margin: int = 2
    photon_interior: int = 4
    k_grid: tuple = DEFAULT_K_GRID
    dims: tuple = (8, 12, 16)
    out: str | None = None
    format: str = "json"
    seed: int = 0
    poly_tol: float = 1e-10
    fn_tol: float = 1e-3
    pinv_rel_tol: float = 1e-10
    branch_eps: float = 1e-6
    # classical-mode settings
    profile: str | None = None
    omega2: float = 4.0
    omega2_linear: tuple | None = None
    t0: float = 0.0
    t1: float = 1.0
    step: float = 1e-3
    gamma_re: float = 0.5
    gamma_im: float = 0.0
    coherent_dim: int = 24

    def tolerances(self) -> ToleranceConfig:
        return ToleranceConfig(self.poly_tol, self.fn_tol,
                               self.pinv_rel_tol, self.branch_eps)

    def basis(self) -> TwoModeBasis:
        if not (2 <= self.da <= 64 and 2 <= self.db <= 64):
            raise HetlabError("mode cutoffs must lie in 2..64")
        return TwoModeBasis(self.da, self.db)

    def params(self) -> HeterodyneParams:
        return HeterodyneParams(self.A, self.B, self.alpha, self.beta)

    def echo(self) -> dict:
        keys = ("mode", "da", "db", "A", "B", "alpha", "beta", "margin",
                "photon_interior", "seed", "poly_tol", "fn_tol",
                "pinv_rel_tol", "branch_eps", "format")
        return {k: getattr(self, k) for k in keys}


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON config file; flags override")
    parser.add_argument("--da", type=int)
    parser.add_argument("--db", type=int)
    parser.add_argument("--A", type=float, dest="A")
    parser.add_argument("--B", type=float, dest="B")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--beta", type=float)
    parser.add_argument("--margin", type=int)
    parser.add_argument("--photon-interior", type=int, dest="photon_interior")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--poly-tol", type=float, dest="poly_tol")
    parser.add_argument("--fn-tol", type=float, dest="fn_tol")
    parser.add_argument("--pinv-rel-tol", type=float, dest="pinv_rel_tol")
    parser.add_argument("--branch-eps", type=float, dest="branch_eps")
    parser.add_argument("--out")
    parser.add_argument("--format", choices=("json", "csv", "markdown"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hetlab",
        description="verify two-mode heterodyne operator identities")
    sub = parser.add_subparsers(dest="mode", required=True)

    p_verify = sub.add_parser("verify", help="run the identity catalog")
    _add_common(p_verify)

    p_sweep = sub.add_parser("sweep", help="sweep the noncommutativity scale")
    _add_common(p_sweep)
    p_sweep.add_argument("--k-grid", dest="k_grid",
                         help="comma-separated frequency ratios in (0,1)")

    p_conv = sub.add_parser("converge", help="truncation convergence table")
    _add_common(p_conv)
    p_conv.add_argument("--dims", help="comma-separated per-mode cutoffs")
    p_conv.add_argument("--cases", help="comma-separated case ids "
                        "(default: all matrix-function cases)")

    p_cl = sub.add_parser("classical", help="classical oscillator checks")
    _add_common(p_cl)
    p_cl.add_argument("--profile", help="two-column CSV of (t, omega^2)")
    p_cl.add_argument("--omega2", type=float, help="constant omega^2")
    p_cl.add_argument("--omega2-linear", dest="omega2_linear",
                      help="c0,c1 for omega^2 = c0 + c1 t")
    p_cl.add_argument("--t0", type=float)
    p_cl.add_argument("--t1", type=float)
    p_cl.add_argument("--step", type=float)
    p_cl.add_argument("--gamma-re", type=float, dest="gamma_re")
    p_cl.add_argument("--gamma-im", type=float, dest="gamma_im")
    p_cl.add_argument("--coherent-dim", type=int, dest="coherent_dim")
    return parser


def _parse_tuple(text, cast):
    parts = [p for p in str(text).replace(",", " ").split() if p]
    return tuple(cast(p) for p in parts)


def load_config(args: argparse.Namespace) -> RunConfig:
    base: dict = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, encoding="utf-8") as fh:
                base = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise HetlabError(f"cannot load config: {exc}") from exc
        if not isinstance(base, dict):
            raise HetlabError("config file must hold a JSON object")
    cfg = RunConfig(mode=args.mode)
    valid = set(cfg.__dataclass_fields__)
    for key, val in base.items():
        if key not in valid:
            raise HetlabError(f"unknown config field {key!r}")
        setattr(cfg, key, tuple(val) if isinstance(val, list) else val)
    for key in valid:
        arg = getattr(args, key, None)
        if arg is not None and key != "mode":
            setattr(cfg, key, arg)
    if isinstance(cfg.k_grid, str):
        cfg.k_grid = _parse_tuple(cfg.k_grid, float)
    if isinstance(cfg.dims, str):
        cfg.dims = _parse_tuple(cfg.dims, int)
    if isinstance(cfg.omega2_linear, str):
        cfg.omega2_linear = _parse_tuple(cfg.omega2_linear, float)
    if cfg.format not in ("json", "csv", "markdown"):
        raise HetlabError(f"unknown format {cfg.format!r}")
    return cfg


def _write_out(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise HetlabError(f"cannot write report: {exc}") from exc


def cmd_verify(cfg: RunConfig) -> int:
    t_start = time.perf_counter()
    reports = run_catalog(builtin_catalog(), cfg.params(), cfg.basis(),
                          cfg.tolerances(), photon_interior=cfg.photon_interior,
                          margin_override=None if cfg.margin == 2 else cfg.margin)
    summary = report_mod.summarize("verify", reports,
                                   time.perf_counter() - t_start, cfg.echo())
    if cfg.format == "json":
        text = report_mod.to_json(report_mod.report_payload(summary, reports))
    elif cfg.format == "csv":
        text = report_mod.reports_to_csv(reports)
    else:
        text = report_mod.to_markdown(summary, reports)
    _write_out(text, cfg.out)
    bad = summary.counts.get("fail", 0) + summary.counts.get("error", 0)
    return EXIT_FAILURE if bad else EXIT_OK


def cmd_sweep(cfg: RunConfig) -> int:
    grid = tuple(float(r) for r in cfg.k_grid)
    if not grid:
        raise HetlabError("empty sweep grid")
    if any(not 0 < r < 1 for r in grid):
        raise HetlabError("sweep ratios must lie in (0, 1)")
    basis = cfg.basis()
    tol = cfg.tolerances()
    proj = photon_projector(basis, cfg.photon_interior)
    nhat = number_diff(basis)
    rows = []
    for r in sorted(grid, reverse=True):
        k_exact, k_first = k_expansion(r)
        try:
            params = HeterodyneParams.from_frequency_ratio(r, cfg.alpha, cfg.beta)
            ops = s_operator(params, basis, tol)
            unit = unitarity_products(ops, tol, proj)
            snc = sn_commutator(ops, nhat, tol, proj)
            rows.append([r, k_exact, k_first, unit.deficit_ss_dag,
                         unit.deficit_sdag_s, snc.vs_s, ""])
        except HetlabError as exc:
            rows.append([r, k_exact, k_first, None, None, None,
                         f"{type(exc).__name__}: {exc}"])
    text = report_mod.rows_to_csv(
        ["r", "k_exact", "k_first_order", "deficit_SSdag", "deficit_SdagS",
         "sn_residual", "error"], rows)
    _write_out(text, cfg.out)
    return EXIT_OK


def cmd_converge(cfg: RunConfig, cases_arg: str | None) -> int:
    dims = tuple(int(d) for d in cfg.dims)
    if len(dims) < 3:
        raise HetlabError("need at least three dimensions")
    if any(not 2 <= d <= 64 for d in dims):
        raise HetlabError("mode cutoffs must lie in 2..64")
    if cases_arg:
        case_ids = _parse_tuple(cases_arg, str)
    else:
        case_ids = tuple(c.id for c in builtin_catalog()
                         if c.kind == MATRIX_FN
                         and not (c.caves_only and
                                  HeterodyneParams(cfg.A, cfg.B).is_balanced)
                         and not (c.sw_only and
                                  not HeterodyneParams(cfg.A, cfg.B).is_balanced))
    rows = convergence_study(case_ids, cfg.params(), dims, cfg.tolerances(),
                             photon_interior=cfg.photon_interior)
    table = [[row.case_id, *row.residuals, row.verdict] for row in rows]
    header = ["case", *[f"d{d}" for d in dims], "verdict"]
    if cfg.format == "markdown":
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "|".join("---" for _ in header) + "|"]
        for row in table:
            cells = [row[0]] + [f"{v:.3e}" for v in row[1:-1]] + [row[-1]]
            lines.append("| " + " | ".join(cells) + " |")
        text = "\n".join(lines) + "\n"
    else:
        text = report_mod.rows_to_csv(header, table)
    _write_out(text, cfg.out)
    bad = any(row.verdict == "non-monotone" for row in rows)
    return EXIT_FAILURE if bad else EXIT_OK


def cmd_classical(cfg: RunConfig) -> int:
    if cfg.profile is not None:
        coeffs = load_profile_csv(cfg.profile)
        kind = "tabulated"
    elif cfg.omega2_linear is not None:
        kind, coeffs = "linear", tuple(cfg.omega2_linear)
    else:
        kind, coeffs = "constant", (cfg.omega2,)

    constant_omega0 = math.sqrt(cfg.omega2) if kind == "constant" else None
    if kind == "constant":
        w0 = constant_omega0
        spec = OscillatorSpec(kind, coeffs, cfg.t0, cfg.t1, cfg.step,
                              y1_init=(1.0, 0.0), y2_init=(0.0, w0))
        consts = EmpConstants(1.0 / w0, 1.0 / w0, 0.0, w0)
    else:
        spec = OscillatorSpec(kind, coeffs, cfg.t0, cfg.t1, cfg.step)
        consts = EmpConstants(1.0, 1.0, 0.0, 1.0)

    gamma = complex(cfg.gamma_re, cfg.gamma_im)
    traj = integrate_oscillator(spec, gamma=gamma,
                                omega0=constant_omega0 or 1.0)
    amp = emp_amplitude(traj, consts)
    phase = classical_phase(traj, consts, math.pi / 2, 0.0,
                            consts.ae, consts.be)
    payload = {
        "profile": {"kind": kind, "t0": cfg.t0, "t1": cfg.t1, "step": cfg.step},
        "wronskian": traj.w0,
        "wronskian_drift": traj.wronskian_drift,
        "emp_residual": amp.residual,
        "route_discrepancy": phase.max_discrepancy,
        "envelope_diagnostic": hh8_diagnostic(traj, amp.sigma,
                                              phase.theta_integral),
        "checks": {},
    }
    failures = 0
    if traj.wronskian_drift > 1e-8:
        failures += 1
    payload["checks"]["wronskian_drift<=1e-8"] = bool(traj.wronskian_drift <= 1e-8)
    payload["checks"]["emp_residual<=1e-6"] = bool(amp.residual <= 1e-6)
    if amp.residual > 1e-6:
        failures += 1
    payload["checks"]["routes_agree<=1e-6"] = bool(phase.max_discrepancy <= 1e-6)
    if phase.max_discrepancy > 1e-6:
        failures += 1
    if constant_omega0 is not None:
        target = constant_omega0 * (traj.t - traj.t[0])
        dev = float(np.max(np.abs(phase.theta_integral - target)))
        payload["constant_frequency_phase_deviation"] = dev
        payload["checks"]["constant_omega_phase<=1e-8"] = bool(dev <= 1e-8)
        if dev > 1e-8:
            failures += 1
    if gamma != 0:
        expc = coherent_expectations(gamma, constant_omega0 or 1.0,
                                     cfg.t1, cfg.coherent_dim)
        closed_a = gamma.conjugate() * np.exp(1j * (constant_omega0 or 1.0) * cfg.t1)
        dev_a = float(abs(expc.a_t - closed_a))
        dev_prod = float(abs(expc.product - abs(gamma) ** 2))
        payload["coherent_expectation_deviation"] = max(dev_a, dev_prod)
        payload["checks"]["coherent_expectations<=1e-8"] = \
            bool(max(dev_a, dev_prod) <= 1e-8)
        if max(dev_a, dev_prod) > 1e-8:
            failures += 1
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    _write_out(text, cfg.out)
    return EXIT_FAILURE if failures else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = load_config(args)
        np.random.seed(cfg.seed)
        if cfg.mode == "verify":
            return cmd_verify(cfg)
        if cfg.mode == "sweep":
            return cmd_sweep(cfg)
        if cfg.mode == "converge":
            return cmd_converge(cfg, getattr(args, "cases", None))
        if cfg.mode == "classical":
            return cmd_classical(cfg)
        raise HetlabError(f"unknown mode {cfg.mode!r}")
    except HetlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
