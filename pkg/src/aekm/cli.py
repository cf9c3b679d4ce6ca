"""Command-line front end: metric sweeps, truncation tables and validation runs.

Every subcommand accepts ``--config FILE``, a flat ``key = value`` text file
whose keys are the long flag names with dashes replaced by underscores
(``snr_db``, ``mc_samples``, ...).  Flags given on the command line override
the file.  Output is CSV; failures print a one-line JSON record on stderr.

Exit status is 0 on success, 2 when the input or a validation comparison
fails, and 1 for any other error.
"""

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from . import __version__
from .channel import (
    FadingParams,
    choose_n_terms,
    series_coefficients,
    truncation_error,
    truncation_error_quadrature,
)
from .errors import AekmError, DomainError, OracleMismatch
from .mc import mc_adp, mc_avg_auc, mc_effective_rate
from .metrics import (
    EdConfig,
    ErConfig,
    adp_asymptotic,
    adp_exact,
    adp_quadrature_oracle,
    avg_auc_asymptotic,
    avg_auc_exact,
    auc_quadrature_oracle,
    effective_rate_asymptotic,
    effective_rate_exact,
    er_quadrature_oracle,
)

EXIT_OK, EXIT_ERROR, EXIT_INVALID = 0, 1, 2
METRICS = ("er", "missed_adp", "cauc", "truncation")
SWEEP_COLUMNS = ("snr_db", "exact", "exact_error_est", "asymptotic", "oracle_quadrature",
                 "mc_mean", "mc_std_error", "n_terms", "epsilon")
TRUNCATION_COLUMNS = ("n_terms", "epsilon", "epsilon_quadrature", "tolerance")
REPORT_COLUMNS = ("metric", "snr_db", "comparison", "value", "reference", "difference",
                  "tolerance", "outcome")
DEFAULT_GRID = (0.0, 30.0, 2.5)

# exact-vs-oracle tolerances: (kind, tolerance)
ORACLE_TOLERANCE = {"er": ("relative", 1e-4), "missed_adp": ("absolute", 1e-3),
                    "cauc": ("absolute", 1e-4)}
MC_SIGMAS = 3.0

# key -> converter for the flat config file and the flags
_FIELDS = {
    "metric": str, "snr_db": str, "alpha": float, "eta": float, "kappa": float,
    "mu": float, "p": float, "q": float, "A": float, "u": int, "pf": float,
    "lambda": float, "tol": float, "n_terms": int, "mc_samples": int, "seed": int,
    "out": str, "h_argument": str, "jobs": int, "metrics": str,
}
_DEFAULTS = {
    "alpha": 2.0, "eta": 1.0, "kappa": 1.0, "mu": 1.0, "p": 1.0, "q": 1.0,
    "A": 0.75, "u": 2, "mc_samples": 0, "seed": 2024, "out": "-",
    "h_argument": "derived", "jobs": 1, "metrics": "er,missed_adp,cauc",
}


class ValidationFailure(Exception):
    """Bad user input; maps to exit status 2."""


@dataclass(frozen=True)
class SweepSpec:
    metric: str
    snr_db_range: Tuple[float, float, float]
    channel: FadingParams
    A: float = 0.75
    u: int = 2
    pf: Optional[float] = None
    lambda_: Optional[float] = None
    n_terms: Optional[int] = None
    tolerance: Optional[float] = None
    mc_samples: int = 0
    seed: int = 2024
    out: str = "-"
    h_argument: str = "derived"
    jobs: int = 1

    def grid(self):
        return snr_grid(*self.snr_db_range)

    def detector(self):
        if self.lambda_ is not None:
            return EdConfig(self.u, self.lambda_)
        return EdConfig.from_pf(self.u, self.pf)


def snr_grid(start, stop, step):
    """Inclusive dB grid ``start, start+step, ..., <= stop``; empty if ``start > stop``."""
    if not step > 0:
        raise ValidationFailure("snr_db step must be positive")
    if start > stop:
        return []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 10) for k in range(count)]


def parse_snr_db(text):
    """``"start:stop:step"``, ``"start:stop"`` (step 2.5) or a single value."""
    try:
        parts = [float(x) for x in str(text).split(":")]
    except ValueError as exc:
        raise ValidationFailure(f"cannot parse snr_db {text!r}") from exc
    if len(parts) == 1:
        return (parts[0], parts[0], 1.0)
    if len(parts) == 2:
        return (parts[0], parts[1], DEFAULT_GRID[2])
    if len(parts) == 3:
        return tuple(parts)
    raise ValidationFailure(f"cannot parse snr_db {text!r}")


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ValidationFailure(f"cannot read config {path!r}: {exc.strerror}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationFailure(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key == "lambda_":
            key = "lambda"
        if key not in _FIELDS:
            raise ValidationFailure(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _convert(values):
    out = {}
    for key, value in values.items():
        if value is None:
            continue
        try:
            out[key] = _FIELDS[key](value)
        except ValueError as exc:
            raise ValidationFailure(f"bad value for {key}: {value!r}") from exc
    return out


def build_spec(values, metric=None):
    """Merge raw ``values`` with defaults and check the sweep invariants."""
    given = _convert(values)
    merged = dict(_DEFAULTS)
    merged.update(given)
    metric = metric or merged.get("metric")
    if metric not in METRICS:
        raise ValidationFailure(f"metric must be one of {', '.join(METRICS)}")
    if "pf" in given and "lambda" in given:
        raise ValidationFailure("give exactly one of pf and lambda")
    if "n_terms" in given and "tol" in given:
        raise ValidationFailure("give exactly one of n_terms and tol")
    pf = given.get("pf")
    lam = given.get("lambda")
    if pf is None and lam is None:
        pf = 0.1
    if pf is not None and not 0.0 < pf < 1.0:
        raise ValidationFailure("pf must lie in (0, 1)")
    n_terms = given.get("n_terms")
    tol = given.get("tol")
    if n_terms is None and tol is None:
        tol = 1e-6
    if n_terms is not None and n_terms < 0:
        raise ValidationFailure("n_terms must be non-negative")
    if tol is not None and not tol > 0:
        raise ValidationFailure("tol must be positive")
    if merged["mc_samples"] < 0:
        raise ValidationFailure("mc_samples must be non-negative")
    if merged["jobs"] < 1:
        raise ValidationFailure("jobs must be at least 1")
    rng = parse_snr_db(merged["snr_db"]) if "snr_db" in merged else DEFAULT_GRID
    try:
        channel = FadingParams(merged["alpha"], merged["eta"], merged["kappa"], merged["mu"],
                               merged["p"], merged["q"])
        spec = SweepSpec(metric, rng, channel, A=merged["A"], u=merged["u"], pf=pf,
                         lambda_=lam, n_terms=n_terms, tolerance=tol,
                         mc_samples=merged["mc_samples"], seed=merged["seed"],
                         out=merged["out"], h_argument=merged["h_argument"],
                         jobs=merged["jobs"])
        ErConfig(spec.A)
        spec.detector()
    except ValueError as exc:
        raise ValidationFailure(str(exc)) from exc
    if not spec.grid():
        raise ValidationFailure(f"empty SNR grid {rng}")
    return spec


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, str)):
        return str(v)
    return repr(float(v))


def _terms(spec):
    if spec.n_terms is not None:
        return spec.n_terms
    return choose_n_terms(spec.channel, spec.tolerance).n_terms


def _safe(fn, *args, **kwargs):
    """Value of an optional column; ``None`` when the form does not apply."""
    try:
        return fn(*args, **kwargs)
    except DomainError:
        return None


def sweep_point(spec, snr_db, n_terms):
    """One CSV row (as a tuple of values) for ``snr_db``."""
    params = spec.channel.with_gamma_bar(10.0 ** (snr_db / 10.0))
    eps = truncation_error(params, series_coefficients(params, n_terms))
    mc = None
    if spec.metric == "er":
        er = ErConfig(spec.A)
        ex = effective_rate_exact(params, er, n_terms, h_argument=spec.h_argument)
        asy = _safe(effective_rate_asymptotic, params, er, n_terms)
        orc = er_quadrature_oracle(params, er, n_terms)
        if spec.mc_samples:
            mc = mc_effective_rate(params, er, spec.seed, spec.mc_samples)
        row = (ex.value, ex.error_estimate, asy and asy.value, orc.value,
               mc and mc.mean, mc and mc.std_error)
    elif spec.metric == "missed_adp":
        ed = spec.detector()
        ex = adp_exact(params, ed, n_terms)
        asy = _safe(adp_asymptotic, params, ed, n_terms)
        orc = adp_quadrature_oracle(params, ed, n_terms)
        if spec.mc_samples:
            mc = mc_adp(params, ed, spec.seed, spec.mc_samples)
        row = (1.0 - ex.value, ex.error_estimate, asy and 1.0 - asy.value, 1.0 - orc.value,
               mc and 1.0 - mc.mean, mc and mc.std_error)
    elif spec.metric == "cauc":
        ex = avg_auc_exact(params, spec.u, n_terms)
        asy = _safe(avg_auc_asymptotic, params, spec.u, n_terms)
        orc = auc_quadrature_oracle(params, spec.u, n_terms)
        if spec.mc_samples:
            mc = mc_avg_auc(params, spec.u, spec.seed, spec.mc_samples)
        row = (1.0 - ex.value, ex.error_estimate, asy and 1.0 - asy.value, 1.0 - orc.value,
               mc and 1.0 - mc.mean, mc and mc.std_error)
    else:
        raise ValueError(f"not a sweep metric: {spec.metric}")
    return (snr_db,) + row + (n_terms, eps)


def _map(fn, items, jobs):
    if jobs == 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map keeps input order, so rows stay sorted by SNR
        return list(pool.map(fn, *zip(*items)))


def run_sweep(spec):
    """CSV text for a metric sweep or a truncation table."""
    if spec.metric == "truncation":
        return run_truncation(spec)
    n_terms = _terms(spec)
    rows = _map(sweep_point, [(spec, s, n_terms) for s in spec.grid()], spec.jobs)
    return _csv(SWEEP_COLUMNS, rows)


def run_truncation(spec):
    """``epsilon(N)`` for ``N = 0 ..`` the selected term count, closed form and quadrature."""
    params = spec.channel
    if spec.n_terms is not None:
        last, tol = spec.n_terms, None
    else:
        last, tol = choose_n_terms(params, spec.tolerance).n_terms, spec.tolerance
    coeffs = series_coefficients(params, last)
    rows = [(n, truncation_error(params, coeffs, n), truncation_error_quadrature(params, coeffs, n), tol)
            for n in range(last + 1)]
    return _csv(TRUNCATION_COLUMNS, rows)


def _csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _compare(metric, snr_db, comparison, value, reference, kind, tol):
    diff = value - reference
    if kind == "relative":
        bound = tol * abs(reference)
    else:
        bound = tol
    ok = abs(diff) <= bound
    outcome = "pass" if ok else ("OracleMismatch" if comparison == "exact_vs_oracle" else "fail")
    return (metric, snr_db, comparison, value, reference, diff, bound, outcome)


def validate_point(spec, metric, snr_db, n_terms):
    """Report rows comparing exact, oracle and (optionally) Monte Carlo at one point."""
    row = sweep_point(replace(spec, metric=metric), snr_db, n_terms)
    (_, exact, _, _, oracle, mc_mean, mc_se, _, _) = row
    kind, tol = ORACLE_TOLERANCE[metric]
    out = [_compare(metric, snr_db, "exact_vs_oracle", exact, oracle, kind, tol)]
    if mc_mean is not None:
        out.append(_compare(metric, snr_db, "exact_vs_mc", exact, mc_mean, "absolute",
                            MC_SIGMAS * mc_se))
    return out


def run_validate(spec, metrics):
    """Report CSV text and whether every comparison passed."""
    n_terms = _terms(spec)
    items = [(spec, m, s, n_terms) for m in metrics for s in spec.grid()]
    rows = [r for chunk in _map(validate_point, items, spec.jobs) for r in chunk]
    eps = truncation_error(spec.channel, series_coefficients(spec.channel, n_terms))
    if spec.tolerance is not None:
        rows.append(("truncation", "", "epsilon_vs_tolerance", eps, 0.0, eps, spec.tolerance,
                     "pass" if abs(eps) <= spec.tolerance else "fail"))
    return _csv(REPORT_COLUMNS, rows), all(r[-1] == "pass" for r in rows)


def _write(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _error_record(kind, message, code, **extra):
    rec = {"error": kind, "message": message, "exit_code": code}
    rec.update(extra)
    sys.stderr.write(json.dumps(rec, sort_keys=True) + "\n")
    return code


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file; flags override it")
    for name in ("alpha", "eta", "kappa", "mu", "p", "q"):
        common.add_argument(f"--{name}", dest=name)
    common.add_argument("--snr-db", dest="snr_db", help="START:STOP:STEP in dB (default 0:30:2.5)")
    common.add_argument("--A", dest="A", help="delay exponent-bandwidth product")
    common.add_argument("--u", dest="u", help="time-bandwidth product")
    common.add_argument("--pf", dest="pf", help="false-alarm probability")
    common.add_argument("--lambda", dest="lambda", help="detection threshold")
    common.add_argument("--tol", dest="tol", help="truncation tolerance")
    common.add_argument("--n-terms", dest="n_terms", help="fixed truncation index N")
    common.add_argument("--mc-samples", dest="mc_samples", help="Monte Carlo draws per point (0 = off)")
    common.add_argument("--seed", dest="seed")
    common.add_argument("--out", dest="out", help="output CSV path ('-' for stdout)")
    common.add_argument("--h-argument", dest="h_argument", choices=("derived", "printed", "auto"))
    common.add_argument("--jobs", dest="jobs", help="worker processes")

    ap = argparse.ArgumentParser(prog="aekm", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)
    sw = sub.add_parser("sweep", parents=[common], help="metric versus average SNR")
    sw.add_argument("--metric", dest="metric", choices=METRICS)
    va = sub.add_parser("validate", parents=[common], help="exact vs oracle vs Monte Carlo report")
    va.add_argument("config_path", nargs="?", help="config file (same as --config)")
    va.add_argument("--metrics", dest="metrics", help="comma-separated subset of er,missed_adp,cauc")
    sub.add_parser("truncation", parents=[common], help="epsilon(N) table")
    return ap


def _collect(args):
    path = getattr(args, "config_path", None) or args.config
    values = read_config(path) if path else {}
    for key in _FIELDS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return values


def main(argv=None):
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        if exc.code not in (0, None):
            return _error_record("UsageError", "invalid command line", EXIT_INVALID)
        return EXIT_OK
    try:
        values = _collect(args)
        if args.command == "sweep":
            spec = build_spec(values)
            if spec.metric == "truncation" and "snr_db" in values:
                raise ValidationFailure("the truncation table has no SNR grid")
            _write(run_sweep(spec), spec.out)
        elif args.command == "truncation":
            values.pop("metric", None)
            spec = build_spec(values, metric="truncation")
            _write(run_truncation(spec), spec.out)
        else:
            metrics = [m.strip() for m in str(values.pop("metrics", _DEFAULTS["metrics"])).split(",")]
            if not metrics or any(m not in ORACLE_TOLERANCE for m in metrics):
                raise ValidationFailure("metrics must be a subset of er,missed_adp,cauc")
            values.pop("metric", None)
            spec = build_spec(values, metric=metrics[0])
            text, ok = run_validate(spec, metrics)
            _write(text, spec.out)
            if not ok:
                failed = [ln.split(",") for ln in text.splitlines()[1:] if not ln.endswith(",pass")]
                kinds = sorted({f[-1] for f in failed})
                kind = "OracleMismatch" if "OracleMismatch" in kinds else "ValidationFailed"
                return _error_record(kind, f"{len(failed)} comparison(s) failed", EXIT_INVALID,
                                     failures=[",".join(f[:3]) for f in failed])
    except ValidationFailure as exc:
        return _error_record("ValidationFailure", str(exc), EXIT_INVALID)
    except OracleMismatch as exc:
        return _error_record("OracleMismatch", str(exc), EXIT_INVALID)
    except (AekmError, ValueError, ArithmeticError, OSError) as exc:
        return _error_record(type(exc).__name__, str(exc), EXIT_ERROR)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
