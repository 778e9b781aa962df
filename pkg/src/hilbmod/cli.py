"""Batch runner: ``hilbmod run <subcommand> key=value ... [--config PATH] [--out PATH]``.

Every subcommand emits a table with fixed columns (listed by ``--help``)
and a trailing ``wall_time`` column.  Exit codes: 0 when every asserted
invariant holds, 1 on an invariant failure, 2 on a bad config, 3 when a
resource bound is exceeded.  Exploratory tables have an empty ``pass`` column
and never fail a run.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import ResourceBoundError
from .extensions import delta_X, block_R, delta_bound_check, sylvester_residual, z_profile
from .funcalc import DN_LOG_CONSTANT, FAMILIES, Polynomial, dn_norm_lower_bound, eval_on_operator
from .model_space import (ScalarSymbol, build_model_space, decompose_X,
                          projection_formula_check, range_check, star_power_check)
from .pisier import (AlphaSequence, FockTrunc, adjoint_power_gap, car_relations_check,
                     growth_experiment, omega_witness)
from .spaces import evaluation_at_zero, hardy, op_norm, shift
from .zspaces import SymbolCoeffs, counterexample_xi, kernel_obstruction_example, zss_identity_check

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_RESOURCE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------- parsing

def _positive_int(s: str) -> int:
    v = int(s)
    if v <= 0:
        raise ValueError(f"expected a positive integer, got {s}")
    return v


def _nonneg_float(s: str) -> float:
    v = float(s)
    if not v >= 0:
        raise ValueError(f"expected a non-negative number, got {s}")
    return v


def _complex_list(s: str) -> list[complex]:
    s = s.strip()
    return [complex(x.replace(" ", "")) for x in s.split(",")] if s else []


def _alpha(s: str) -> AlphaSequence:
    """``zero``, ``power:P``, ``finite:a0,a1,...`` or ``geometric:q``."""
    kind, _, arg = s.partition(":")
    if kind == "zero":
        return AlphaSequence.zero()
    if kind == "power":
        return AlphaSequence.power_law(float(arg))
    if kind == "finite":
        return AlphaSequence.finite(_complex_list(arg))
    if kind == "geometric":
        return AlphaSequence.geometric(complex(arg))
    raise ValueError(f"unknown alpha rule {s!r}")


def _ladder(s: str) -> list[tuple[int, int, int]]:
    out = []
    for step in s.split(","):
        parts = [_positive_int(p) for p in step.split(":")]
        if len(parts) != 3:
            raise ValueError(f"ladder step {step!r} is not blocks:n_max:d_max")
        out.append(tuple(parts))
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    params: dict[str, Any]
    out: str | None = None
    fmt: str = "csv"
    seed: int = 0
    tol: float | None = None


@dataclass
class Table:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)
    ok: bool = True

    def add(self, row: dict, passed: bool | None = None, t0: float | None = None):
        row = dict(row)
        if "pass" in self.columns:
            row["pass"] = "" if passed is None else bool(passed)
            if passed is False:
                self.ok = False
        row["wall_time"] = round(time.perf_counter() - t0, 6) if t0 is not None else 0.0
        self.rows.append(row)


@dataclass(frozen=True)
class Subcommand:
    func: Callable[[dict, int, float | None], Table]
    keys: dict[str, tuple[Callable[[str], Any], Any]]
    columns: list[str]
    help: str


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, complex):
        return repr(v)
    return str(v)


def render(table: Table, fmt: str) -> str:
    cols = table.columns + ["wall_time"]
    if fmt == "json":
        return json.dumps([{c: r.get(c, "") for c in cols} for r in table.rows],
                          indent=1, default=_fmt) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in table.rows:
        w.writerow([_fmt(r.get(c, "")) for c in cols])
    return buf.getvalue()


# ---------------------------------------------------------------- experiments

def _contraction(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return a / (op_norm(a) * (1 + rng.random()))


def _delta_bound(p, seed, tol):
    tol = 1e-10 if tol is None else tol
    t = Table(["trial", "dim1", "dim2", "degree", "lhs", "rhs", "block_gap", "pass"])
    rng = np.random.default_rng(seed)
    for i in range(p["trials"]):
        t0 = time.perf_counter()
        n1, n2 = (int(x) for x in rng.integers(1, p["dim"] + 1, 2))
        T1, T2 = _contraction(rng, n1), _contraction(rng, n2)
        X = rng.standard_normal((n1, n2)) + 1j * rng.standard_normal((n1, n2))
        d = int(rng.integers(1, p["degree"] + 1))
        phi = Polynomial(rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1))
        rep = delta_bound_check(phi, T1, X, T2)
        top = eval_on_operator(phi, block_R(T1, X, T2)).entries[:n1, n1:]
        gap = float(np.abs(top - delta_X(phi, T1, X, T2).entries).max())
        t.add(dict(trial=i, dim1=n1, dim2=n2, degree=phi.degree, lhs=rep.lhs, rhs=rep.rhs,
                   block_gap=gap), rep.passed and gap <= tol, t0)
    return t


def _dlog_bound(p, seed, tol):
    t = Table(["n", "bound", "M", "rhs", "pass"])
    fams = FAMILIES if p["families"] == "all" else p["families"].split(",")
    n = 1
    while n <= p["n_max"]:
        t0 = time.perf_counter()
        b = dn_norm_lower_bound(n, fams, size=p["size"], seed=seed, n_ref=max(p["n_max"], 256))
        rhs = p["M"] * (1 + math.log(n))
        t.add(dict(n=n, bound=b, M=p["M"], rhs=rhs), b <= rhs, t0)
        n *= 2
    return t


def _z_profile(p, seed, tol):
    """``backward``: evaluation at 0 under ``S*`` (flat); ``forward``: coefficient sum under ``S``;
    ``obstruction``: the ``H^2 (+) L^2`` functional under ``S* (+) U``."""
    t = Table(["case", "n", "zeta", "pass"])
    N, case = p["N"], p["case"]
    t0 = time.perf_counter()
    if case == "obstruction":
        prof = kernel_obstruction_example(N, profile_N=N).profile
    else:
        S = shift(hardy(N)).entries
        if case == "backward":
            prof = z_profile(evaluation_at_zero(hardy(N)), S.conj().T, N)
        elif case == "forward":
            prof = z_profile(np.ones((1, N + 1)), S, N)
        else:
            raise ConfigError(f"unknown z-profile case {case!r}")
    for n, z in enumerate(prof.values):
        t.add(dict(case=case, n=n, zeta=float(z)), None, t0)
    return t


def _toeplitz_hankel(p, seed, tol):
    tol = 1e-10 if tol is None else tol
    t = Table(["symbol", "fiber", "n_sym", "toeplitz_gap", "hankel_gap", "pass"])
    rng = np.random.default_rng(seed)
    for i in range(p["symbols"]):
        t0 = time.perf_counter()
        f = p["fiber"] if p["fiber"] > 0 else 1 + i % 2
        n_sym = int(rng.integers(0, p["N"] // 2 + 1))
        blocks = [(rng.standard_normal((f, f)) + 1j * rng.standard_normal((f, f))) / (k + 1)
                  for k in range(n_sym + 1)]
        rep = zss_identity_check(SymbolCoeffs(blocks), p["N"], batch=4, seed=seed + i)
        t.add(dict(symbol=i, fiber=f, n_sym=n_sym, toeplitz_gap=rep.toeplitz_gap,
                   hankel_gap=rep.hankel_gap), max(rep.toeplitz_gap, rep.hankel_gap) <= tol, t0)
    return t


def _xi(p, seed, tol):
    t = Table(["n", "profile", "ratio_to_lo", "pass"])
    t0 = time.perf_counter()
    rep = counterexample_xi(p["M_grid"], p["N_modes"])
    lo = rep.profile[p["lo"]]
    n = 1
    while n <= p["N_modes"]:
        t.add(dict(n=n, profile=float(rep.profile[n]), ratio_to_lo=float(rep.profile[n] / lo)), None, t0)
        n *= 2
    ratio = rep.ratio(p["N_modes"], p["lo"])
    t.add(dict(n="summary", profile=float(rep.profile[-1]), ratio_to_lo=ratio),
          rep.strictly_increasing and ratio >= p["min_ratio"], t0)
    return t


def _symbol(p) -> ScalarSymbol:
    return ScalarSymbol(p["zeros"], p["r"])


def _model_space(p, seed, tol):
    tol = 1e-8 if tol is None else tol
    t = Table(["check", "value", "threshold", "pass"])
    t0 = time.perf_counter()
    ms = build_model_space(_symbol(p), p["N"])
    rng = np.random.default_rng(seed)
    t.add(dict(check="dim_H", value=ms.dim, threshold=""), None, t0)
    t.add(dict(check="buffer", value=ms.buffer, threshold=""), None, t0)
    orth = float(np.abs(ms.basis_M.conj().T @ ms.basis_H).max()) if ms.dim else 0.0
    norm = float(np.abs(ms.basis_H.conj().T @ ms.basis_H - np.eye(ms.dim)).max()) if ms.dim else 0.0
    t.add(dict(check="orthogonality", value=orth, threshold=1e-10), orth <= 1e-10, t0)
    t.add(dict(check="normalization", value=norm, threshold=1e-10), norm <= 1e-10, t0)
    pr = projection_formula_check(ms)
    t.add(dict(check="projection_gap_M", value=pr.gap_M, threshold=tol), pr.gap_M <= tol, t0)
    t.add(dict(check="projection_gap_H", value=pr.gap_H, threshold=tol), pr.gap_H <= tol, t0)
    rc = [range_check(ms, ms.random_h(rng)) for _ in range(p["trials"])]
    if ms.dim >= 2:
        # one vector with f_1(0) = 0 exercises the other side of the criterion
        f = ms.random_h(rng)
        f = f - ms.basis_H[0].conj() * (ms.to_ambient(f)[0] / np.linalg.norm(ms.basis_H[0]) ** 2)
        if np.linalg.norm(f) > 1e-8:
            rc.append(range_check(ms, f / np.linalg.norm(f)))
    agree = sum(r.consistent for r in rc)
    t.add(dict(check="range_equivalence", value=f"{agree}/{len(rc)}", threshold=""), agree == len(rc), t0)
    margin = 6
    star = max(star_power_check(ms, n, ms.random_h(rng, margin)) for n in range(5))
    t.add(dict(check="star_power_gap", value=star, threshold=tol), star <= tol, t0)
    nil = 0
    if ms.dim:
        pw = np.eye(ms.dim)
        while nil <= ms.dim and op_norm(pw) > 1e-10:
            pw, nil = pw @ ms.S_theta, nil + 1
    t.add(dict(check="S_theta_nilpotency_order", value=nil if nil <= ms.dim else "none",
               threshold=""), None, t0)
    X = np.array([ms.random_h(rng) for _ in range(2)]).conj()
    dec = decompose_X(ms, X)
    t.add(dict(check="profile_bound_excess", value=dec.profile1.final - dec.x_norm, threshold=tol),
          dec.profile_bound_holds, t0)
    t.add(dict(check="douglas_residual", value=dec.factor_residual, threshold=1e-7),
          dec.factor_residual <= 1e-7, t0)
    return t


def _decompose(p, seed, tol):
    tol = 1e-7 if tol is None else tol
    t = Table(["trial", "x_norm", "zeta_N", "factor_residual", "pass"])
    ms = build_model_space(_symbol(p), p["N"])
    rng = np.random.default_rng(seed)
    for i in range(p["trials"]):
        t0 = time.perf_counter()
        X = np.array([ms.random_h(rng) * rng.standard_normal() for _ in range(p["rows"])]).conj()
        d = decompose_X(ms, X)
        t.add(dict(trial=i, x_norm=d.x_norm, zeta_N=d.profile1.final,
                   factor_residual=d.factor_residual),
              d.profile_bound_holds and d.factor_residual <= tol, t0)
    return t


def _car_check(p, seed, tol):
    tol = 1e-12 if tol is None else tol
    t = Table(["check", "value", "threshold", "pass"])
    t0 = time.perf_counter()
    fock = FockTrunc(p["n_max"])
    k_max = p["n_max"] - 1 if p["k_max"] is None else p["k_max"]
    rep = car_relations_check(fock, k_max)
    t.add(dict(check="square_zero", value=rep.square_exact, threshold=""), rep.square_exact, t0)
    for name in ("max_anticomm_gap", "max_mixed_gap", "norm_gap"):
        v = getattr(rep, name)
        t.add(dict(check=name, value=v, threshold=tol), v <= tol, t0)
    alpha = _alpha(p["alpha"])
    blocks = max(p["blocks"], fock.n_max)
    for n in range(1, 4):
        g = adjoint_power_gap(alpha, blocks, fock, n, seed=seed)
        t.add(dict(check=f"adjoint_power_n{n}", value=g, threshold=1e-8), g <= 1e-8, t0)
    return t


def _pisier_growth(p, seed, tol):
    t = Table(["blocks", "n_max", "d_max", "dim", "zeroed_blocks", "pb_estimate",
               "pb_criterion", "similarity_partial", "pass"])
    t0 = time.perf_counter()
    for r in growth_experiment(_alpha(p["alpha"]), p["ladder"], seed=seed, samples=p["samples"]):
        t.add(dict(blocks=r.blocks, n_max=r.n_max, d_max=r.d_max, dim=r.dim,
                   zeroed_blocks=r.zeroed_blocks, pb_estimate=r.pb_estimate,
                   pb_criterion=r.pb_criterion, similarity_partial=r.similarity_partial), None, t0)
    return t


def _omega(p, seed, tol):
    tol = 1e-12 if tol is None else tol
    t = Table(["check", "value", "threshold", "pass"])
    t0 = time.perf_counter()
    rep = omega_witness(FockTrunc(p["n_max"]), _alpha(p["alpha"]), p["blocks"])
    t.add(dict(check="W_k_star_omega", value=rep.star_gaps, threshold=tol), rep.star_gaps <= tol, t0)
    t.add(dict(check="nX_star_z_omega", value=rep.hankel_gaps, threshold=tol), rep.hankel_gaps <= tol, t0)
    t.add(dict(check="Omega_pairing", value=rep.omega_pairing, threshold=tol),
          abs(rep.omega_pairing - 1) <= tol, t0)
    t.add(dict(check="R_omega", value=rep.kernel_gap, threshold=tol), rep.kernel_gap <= tol, t0)
    t.add(dict(check="W_0_star_omega", value=rep.w0_star_omega, threshold=""), None, t0)
    for b, r in zip(rep.ladder, rep.obstruction):
        t.add(dict(check=f"obstruction_blocks{b}", value=r, threshold=1 - 1e-8), r >= 1 - 1e-8, t0)
    return t


def _sylvester(p, seed, tol):
    tol = 1e-9 if tol is None else tol
    t = Table(["trial", "dim1", "dim2", "residual", "pass"])
    rng = np.random.default_rng(seed)
    for i in range(p["trials"]):
        t0 = time.perf_counter()
        n1, n2 = (int(x) for x in rng.integers(1, p["dim"] + 1, 2))
        T1 = rng.standard_normal((n1, n1)) + 1j * rng.standard_normal((n1, n1))
        T2 = rng.standard_normal((n2, n2)) + 1j * rng.standard_normal((n2, n2))
        A = rng.standard_normal((n1, n2)) + 1j * rng.standard_normal((n1, n2))
        r = sylvester_residual(T1, T2, T1 @ A - A @ T2).residual
        t.add(dict(trial=i, dim1=n1, dim2=n2, residual=r), r <= tol, t0)
    t0 = time.perf_counter()
    ex = kernel_obstruction_example(p["N"])
    bound = ex.kernel_vector_image - 1e-8
    t.add(dict(trial="obstruction", dim1=ex.T.shape[0], dim2=ex.T.shape[0],
               residual=ex.split.residual_norm), ex.split.residual_norm >= bound, t0)
    return t


def _seed(s: str) -> int:
    v = int(s)
    if v < 0:
        raise ValueError("seed must be non-negative")
    return v


GLOBAL_KEYS = {"seed": (_seed, None), "tol": (_nonneg_float, None)}

_MS_KEYS = {"zeros": (_complex_list, [0.0, 0.0]), "r": (float, 1.0), "N": (_positive_int, 64)}

SUBCOMMANDS: dict[str, Subcommand] = {
    "delta-bound": Subcommand(_delta_bound, {"degree": (_positive_int, 12), "trials": (_positive_int, 100),
                                             "dim": (_positive_int, 12)},
                              ["trial", "dim1", "dim2", "degree", "lhs", "rhs", "block_gap", "pass"],
                              "norm bound for delta_X(phi) on random contractions"),
    "dlog-bound": Subcommand(_dlog_bound, {"n_max": (_positive_int, 256), "families": (str, "all"),
                                           "size": (_positive_int, 16), "M": (float, DN_LOG_CONSTANT)},
                             ["n", "bound", "M", "rhs", "pass"], "||D^n|| lower bounds against M(1+log n)"),
    "z-profile": Subcommand(_z_profile, {"N": (_positive_int, 64), "case": (str, "backward")},
                            ["case", "n", "zeta", "pass"], "orbit-sum profile (exploratory)"),
    "toeplitz-hankel": Subcommand(_toeplitz_hankel, {"symbols": (_positive_int, 50), "N": (_positive_int, 32),
                                                     "fiber": (int, 0)},
                                  ["symbol", "fiber", "n_sym", "toeplitz_gap", "hankel_gap", "pass"],
                                  "orbit sums vs Toeplitz/Hankel norms (fiber=0 alternates 1 and 2)"),
    "xi-counterexample": Subcommand(_xi, {"M_grid": (_positive_int, 32768), "N_modes": (_positive_int, 4096),
                                          "lo": (_positive_int, 128), "min_ratio": (_nonneg_float, 1.5)},
                                    ["n", "profile", "ratio_to_lo", "pass"], "partial sums for xi^2"),
    "model-space": Subcommand(_model_space, {**_MS_KEYS, "trials": (_positive_int, 20)},
                              ["check", "value", "threshold", "pass"], "model-space checks for one symbol"),
    "decompose": Subcommand(_decompose, {**_MS_KEYS, "trials": (_positive_int, 5), "rows": (_positive_int, 2)},
                            ["trial", "x_norm", "zeta_N", "factor_residual", "pass"], "X = X1 + X2 split"),
    "car-check": Subcommand(_car_check, {"n_max": (_positive_int, 4), "k_max": (int, None),
                                         "alpha": (str, "power:1.5"), "blocks": (_positive_int, 8)},
                            ["check", "value", "threshold", "pass"], "CAR relations and R(X_alpha)* powers"),
    "pisier-growth": Subcommand(_pisier_growth, {"alpha": (str, "power:1.5"),
                                                 "ladder": (_ladder, [(4, 2, 8), (6, 3, 8), (8, 4, 8)]),
                                                 "samples": (_positive_int, 16)},
                                ["blocks", "n_max", "d_max", "dim", "zeroed_blocks", "pb_estimate",
                                 "pb_criterion", "similarity_partial", "pass"],
                                "pb-constant estimates along a ladder (exploratory)"),
    "omega-witness": Subcommand(_omega, {"n_max": (_positive_int, 3), "blocks": (_positive_int, 8),
                                         "alpha": (str, "power:1.5")},
                                ["check", "value", "threshold", "pass"], "kernel witness for R(X_alpha)"),
    "sylvester": Subcommand(_sylvester, {"trials": (_positive_int, 50), "dim": (_positive_int, 8),
                                         "N": (_positive_int, 32)},
                            ["trial", "dim1", "dim2", "residual", "pass"],
                            "coboundary residuals and the kernel obstruction"),
}


def parse_pairs(pairs: list[str], keys: dict) -> dict:
    params = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        k, v = (s.strip() for s in item.split("=", 1))
        if k not in keys:
            raise ConfigError(f"unknown key {k!r}; allowed: {', '.join(keys)}")
        conv = keys[k][0]
        try:
            params[k] = conv(v)
        except (ValueError, TypeError) as e:
            raise ConfigError(f"bad value for {k}: {e}") from None
    return params


def read_config_file(path: str) -> list[str]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                out.append(line)
    return out


def build_config(sub: str, pairs: list[str], config_path: str | None, out: str | None,
                 fmt: str, seed: int | None, tol: float | None) -> ExperimentConfig:
    if sub not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {sub!r}")
    keys = {**SUBCOMMANDS[sub].keys, **GLOBAL_KEYS}
    params = {k: d for k, (_, d) in SUBCOMMANDS[sub].keys.items()}
    if config_path:
        params.update(parse_pairs(read_config_file(config_path), keys))
    params.update(parse_pairs(pairs, keys))
    # command-line flags win over key=value pairs for the shared keys
    pair_seed, pair_tol = params.pop("seed", None), params.pop("tol", None)
    seed = seed if seed is not None else (pair_seed if pair_seed is not None else 0)
    tol = tol if tol is not None else pair_tol
    if "alpha" in params and isinstance(params["alpha"], str):
        try:
            _alpha(params["alpha"])
        except ValueError as e:
            raise ConfigError(str(e)) from None
    if tol is not None and not tol >= 0:
        raise ConfigError("--tol must be non-negative")
    return ExperimentConfig(sub, params, out, fmt, seed, tol)


def run(config: ExperimentConfig) -> tuple[int, str]:
    """Execute one experiment; returns the exit code and the rendered report."""
    sub = SUBCOMMANDS[config.subcommand]
    try:
        table = sub.func(config.params, config.seed, config.tol)
    except ResourceBoundError as e:
        return EXIT_RESOURCE, f"resource bound exceeded: {e}\n"
    except ConfigError as e:
        return EXIT_CONFIG, f"config error: {e}\n"
    text = render(table, config.fmt)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return (EXIT_OK if table.ok else EXIT_INVARIANT), text


def _parser() -> argparse.ArgumentParser:
    epilog = "\n".join(
        f"  {name}: {s.help}\n    keys: " + ", ".join(f"{k}={d!s}" for k, (_, d) in s.keys.items())
        + "\n    columns: " + ",".join(s.columns + ["wall_time"])
        for name, s in SUBCOMMANDS.items())
    p = argparse.ArgumentParser(prog="hilbmod", formatter_class=argparse.RawDescriptionHelpFormatter,
                                description="Run a numerical experiment and emit a CSV/JSON table.",
                                epilog="subcommands:\n" + epilog)
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one experiment")
    r.add_argument("subcommand")
    r.add_argument("pairs", nargs="*", metavar="key=value")
    r.add_argument("--config", metavar="PATH")
    r.add_argument("--out", metavar="PATH")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--seed", type=int)
    r.add_argument("--tol", type=float)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    try:
        # pairs may follow options, which argparse leaves in the extras
        args, extra = parser.parse_known_args(argv)
        if any("=" not in x or x.startswith("-") for x in extra):
            parser.error(f"unrecognized arguments: {' '.join(extra)}")
        args.pairs = args.pairs + extra
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        if args.seed is not None and args.seed < 0:
            raise ConfigError("--seed must be non-negative")
        cfg = build_config(args.subcommand, args.pairs, args.config, args.out,
                           args.format, args.seed, args.tol)
    except (ConfigError, OSError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    code, text = run(cfg)
    if code in (EXIT_RESOURCE, EXIT_CONFIG):
        print(text, file=sys.stderr, end="")
    elif not cfg.out:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
