"""Parameter sweeps, conjecture fuzzing, scaling and boson-map checks.

These are the operations behind the command-line subcommands. Every grid
point or trial is an independent task whose seed is derived from
``(global_seed, task_index)``, so results do not depend on worker count.
"""
from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import semiclassical as sc
from ..dicke import (
    DickeVector,
    coherent_state,
    moments,
    random_parity_state,
    random_real_state,
    random_symmetric_state,
)
from ..directional import check_conjecture, max_directional
from ..eigensolve import dense_hermitian_eigs, ground_state
from ..hamiltonians import (
    ModelParams,
    boson_order_parameter,
    boson_to_field,
    build_boson_hamiltonian,
    build_spin_hamiltonian,
)
from ..pairwise import concurrence_parity, concurrence_wootters, reduced_two_spin
from .exact import ground_point
from .fitting import extrapolate, fit_power_law

MODELS = ("biaxial_transverse", "uniaxial_field", "isotropic", "biaxial_general", "boson")
MODES = ("exact", "semiclassical", "both")
RESOLVE = ("parity", "min_concurrence")

#: sweep parameters of each model, in grid (lexicographic) order
MODEL_AXES = {
    "biaxial_transverse": ("gamma", "hz"),
    "uniaxial_field": ("hx", "hz"),
    "isotropic": ("hz",),
    "biaxial_general": ("gamma", "hx", "hy", "hz"),
    "boson": ("x", "y"),
}

ROW_FIELDS = (
    "model", "gamma", "hx", "hy", "hz", "x", "y", "N", "E0", "e0_classical", "beta0",
    "C_R_exact", "C_R_semiclassical", "m", "nstar_x", "nstar_y", "nstar_z", "error",
)

WORKERS_ENV = "SPINCONC_WORKERS"


def parse_range(text):
    """``"start:stop:step"`` (stop inclusive) or a comma list into floats."""
    text = str(text).strip()
    if ":" not in text:
        vals = [float(t) for t in text.split(",") if t.strip()]
        if not vals:
            raise ValueError("empty range")
        return vals
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be start:stop:step, got {text!r}")
    start, stop, step = map(float, parts)
    if step <= 0:
        raise ValueError("step must be positive")
    if stop < start:
        raise ValueError("range is empty")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # integer multiples avoid accumulated rounding; snap near-zero to 0
    return [0.0 if abs(v) < 1e-12 else round(v, 12) for v in (start + step * i for i in range(count))]


def parse_int_list(text):
    """``"8,16,32"``, ``"2:10"`` (inclusive) or ``"2:10:2"`` into ints."""
    text = str(text).strip()
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) == 3 else 1
        if step <= 0 or stop < start:
            raise ValueError(f"bad integer range {text!r}")
        vals = list(range(start, stop + 1, step))
    else:
        vals = [int(t) for t in text.split(",") if t.strip()]
    if not vals or min(vals) < 2:
        raise ValueError("N values must be integers >= 2")
    return vals


@dataclass
class SweepSpec:
    model: str
    ranges: dict
    Ns: list
    mode: str = "both"
    seed: int = 0
    fixed: dict = field(default_factory=dict)
    resolve: str = "parity"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.resolve not in RESOLVE:
            raise ValueError(f"unknown degeneracy resolution {self.resolve!r}")
        if not self.Ns or min(self.Ns) < 2:
            raise ValueError("N values must be >= 2")
        for name in MODEL_AXES[self.model]:
            vals = self.ranges.get(name)
            if not vals:
                raise ValueError(f"model {self.model} needs a value for {name}")

    def points(self):
        """Grid points in lexicographic order of (axes..., N)."""
        axes = MODEL_AXES[self.model]
        grids = [self.ranges[a] for a in axes]
        for combo in itertools.product(*grids, self.Ns):
            yield dict(zip(axes, combo[:-1])), combo[-1]


def task_seed(global_seed, index):
    """Reproducible per-task seed, independent of scheduling."""
    return int(np.random.SeedSequence([int(global_seed), int(index)]).generate_state(1)[0])


def _spin_params(model, p, N):
    if model == "biaxial_transverse":
        return ModelParams.biaxial_transverse(p["gamma"], p["hz"], N)
    if model == "uniaxial_field":
        return ModelParams.uniaxial(p["hx"], p["hz"], N)
    if model == "isotropic":
        return ModelParams.biaxial_transverse(1.0, p["hz"], N)
    if model == "biaxial_general":
        return ModelParams.biaxial(p["gamma"], p["hx"], p.get("hy", 0.0), p["hz"], N)
    raise ValueError(model)


def _uniaxial_semiclassical(hx, hz, row):
    if hz < 0:
        # a pi rotation about y maps (hx, hz) to (-hx, -hz) with the same spectrum
        hx, hz = -hx, -hz
    sol = sc.solve(hx, hz)
    row.update(beta0=sol.beta0, e0_classical=sol.e0, C_R_semiclassical=sol.cR)
    return sol


def _semiclassical(model, p, N, row):
    if model == "biaxial_transverse":
        g, hz = p["gamma"], p["hz"]
        bm = sc.minimize_beta(0.0, hz)
        row.update(beta0=bm.beta0, e0_classical=bm.energy)
        if g < 1.0:
            row["C_R_semiclassical"] = sc.rescaled_concurrence_transverse(g, hz)
        else:
            row["C_R_semiclassical"] = sc.rescaled_concurrence_isotropic(hz, N)[1]
        if math.isnan(row["m"]):
            row["m"] = sc.order_parameter_transverse(hz)
    elif model == "uniaxial_field":
        _uniaxial_semiclassical(p["hx"], p["hz"], row)
    elif model == "isotropic":
        M0, cr = sc.rescaled_concurrence_isotropic(p["hz"], N)
        row["C_R_semiclassical"] = cr
        if math.isnan(row["m"]):
            row["m"] = 1.0 - 4.0 * M0 * M0 / (N * N)
    elif model == "boson":
        mp = boson_to_field(p["x"], p["y"])
        _uniaxial_semiclassical(mp.hx, mp.hz, row)


def _exact(model, p, N, seed, row, resolve):
    if model == "boson":
        A = build_boson_hamiltonian(p["x"], p["y"], N)
        e, psi = ground_state(A, seed=seed)
        mom = moments(psi)
        c = concurrence_wootters(reduced_two_spin(mom))
        n = max_directional(mom)[0]
        row.update(E0=e, C_R_exact=(N - 1) * c, m=boson_order_parameter(psi))
    else:
        pt = ground_point(_spin_params(model, p, N), resolve=resolve, seed=seed)
        n = pt.direction
        row.update(E0=pt.energy, C_R_exact=pt.cR, m=pt.m)
    row.update(nstar_x=float(n[0]), nstar_y=float(n[1]), nstar_z=float(n[2]))


def run_point(model, p, N, mode, seed=0, resolve="parity"):
    """One row of a sweep; failures are reported in the ``error`` field.

    ``resolve`` picks the member of an exactly degenerate ground level, see
    :func:`spinconc.lab.exact.ground_point`.
    """
    row = {f: float("nan") for f in ROW_FIELDS}
    row.update(model=model, N=N, error="")
    row.update({k: v for k, v in p.items()})
    try:
        if mode in ("exact", "both"):
            _exact(model, p, N, seed, row, resolve)
        if mode in ("semiclassical", "both"):
            _semiclassical(model, p, N, row)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _run_task(args):
    return run_point(*args)


def worker_count():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_sweep(spec, workers=None):
    """Evaluate every grid point; rows come back in grid order."""
    tasks = [
        (spec.model, {**spec.fixed, **p}, N, spec.mode, task_seed(spec.seed, i), spec.resolve)
        for i, (p, N) in enumerate(spec.points())
    ]
    workers = worker_count() if workers is None else workers
    if workers <= 1 or len(tasks) < 2:
        return [_run_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))


CORPORA = ("random", "coherent", "parity", "real")


def corpus_state(corpus, N, seed):
    """Trial state for the conjecture fuzzer."""
    if corpus == "random":
        return random_symmetric_state(N, seed)
    if corpus == "real":
        return random_real_state(N, seed)
    if corpus == "parity":
        return random_parity_state(N, seed, parity=seed % 2)
    if corpus == "coherent":
        rng = np.random.Generator(np.random.PCG64(seed))
        return coherent_state(N, float(np.arccos(rng.uniform(-1, 1))), float(rng.uniform(0, 2 * np.pi)))
    raise ValueError(f"unknown corpus {corpus!r}")


def _fuzz_task(args):
    corpus, N, seed, tol, index = args
    rep = check_conjecture(corpus_state(corpus, N, seed), tol=tol, seed=seed)
    rec = rep.as_record()
    rec["trial"] = index
    if corpus == "parity":
        rec["c_parity"] = concurrence_parity(reduced_two_spin(moments(corpus_state(corpus, N, seed))))
    return rec


FUZZ_FIELDS = (
    "trial", "N", "seed", "c_wootters", "c_unclamped", "c_conjecture", "max_cn",
    "n_x", "n_y", "n_z", "gap", "gap_unclamped", "witness", "passed", "passed_unclamped",
    "rechecked", "c_parity",
)


def fuzz_conjecture(Ns, trials, seed, tol, corpus="random", workers=None):
    """Run ``trials`` conjecture checks cycling through ``Ns``.

    Returns ``(summary, records)``; a trial fails when either the clamped or
    the unclamped comparison exceeds ``tol`` (and, for the parity corpus,
    when the closed form disagrees with the Wootters route).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if corpus not in CORPORA:
        raise ValueError(f"unknown corpus {corpus!r}")
    tasks = [(corpus, Ns[i % len(Ns)], task_seed(seed, i), tol, i) for i in range(trials)]
    workers = worker_count() if workers is None else workers
    if workers <= 1:
        records = [_fuzz_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_fuzz_task, tasks, chunksize=64))
    failures = 0
    for r in records:
        ok = r["passed"] and r["passed_unclamped"]
        if "c_parity" in r:
            ok = ok and abs(r["c_parity"] - r["c_wootters"]) <= tol
        r["failed"] = not ok
        failures += not ok
    summary = {
        "corpus": corpus,
        "trials": trials,
        "failures": failures,
        "max_gap": max(r["gap"] for r in records),
        "max_gap_unclamped": max(r["gap_unclamped"] for r in records),
        "max_concurrence": max(r["c_wootters"] for r in records),
        "rechecked": sum(bool(r["rechecked"]) for r in records),
        "tol": tol,
    }
    return summary, records


def exact_curve(model, p, Ns, seed=0, method="auto"):
    """``(C_R, m, energy)`` arrays of exact ground states for each ``N``."""
    out = []
    for i, N in enumerate(Ns):
        pt = ground_point(_spin_params(model, p, N), method=method, seed=task_seed(seed, i), directions=False)
        out.append((pt.cR, pt.m, pt.energy))
    return np.array(out)


def semiclassical_reference(model, p):
    """Thermodynamic-limit ``C_R`` for models with a closed form, else ``None``."""
    if model == "biaxial_transverse" and p["gamma"] < 1.0:
        if p["hz"] == 1.0:
            return 1.0
        return sc.rescaled_concurrence_transverse(p["gamma"], p["hz"])
    if model == "uniaxial_field":
        hx, hz = p["hx"], p["hz"]
        if hx == 0.0 and hz == 1.0:
            return 1.0
        return sc.rescaled_concurrence_limit(hx, hz) if hz >= 0 else sc.rescaled_concurrence_limit(-hx, -hz)
    return None


def scaling(model, p, Ns, reference=None, seed=0, method="auto"):
    """Fit ``|reference - C_R(N)| ~ N^-a``; returns ``(FitResult, rows)``."""
    if reference is None:
        reference = semiclassical_reference(model, p)
        if reference is None:
            raise ValueError("no closed-form reference for this model; pass one explicitly")
    curve = exact_curve(model, p, Ns, seed=seed, method=method)
    fit = fit_power_law(Ns, curve[:, 0], reference)
    rows = [
        {"N": N, "C_R_exact": cr, "m": m, "E0": e, "reference": reference, "distance": abs(reference - cr)}
        for N, (cr, m, e) in zip(Ns, curve)
    ]
    return fit, rows


def extrapolate_point(model, p, Ns, order=2, seed=0):
    """Extrapolated ``C_R`` and ``m`` with their closed-form references."""
    curve = exact_curve(model, p, Ns, seed=seed)
    cr = extrapolate(Ns, curve[:, 0], order=order)
    m = extrapolate(Ns, curve[:, 1], order=order)
    ref_cr = semiclassical_reference(model, p)
    ref_m = sc.order_parameter_transverse(p["hz"]) if model == "biaxial_transverse" else None
    return {"C_R": cr, "m": m, "C_R_reference": ref_cr, "m_reference": ref_m, "curve": curve}


@dataclass(frozen=True)
class BosonMapReport:
    x: float
    y: float
    N: int
    hx: float
    hz: float
    scale: float
    shift: float
    x_c: float
    max_deviation: float
    fit_scale: float
    fit_shift: float
    order_parameter_boson: float
    order_parameter_spin: float

    @property
    def passed(self):
        return self.max_deviation <= 1e-9 * self.N

    def as_record(self):
        rec = dict(self.__dict__)
        rec["passed"] = self.passed
        return rec


def verify_boson_map(x, y, N):
    """Compare the boson spectrum with the affinely mapped spin spectrum.

    The closed-form ``(scale, shift)`` is used for the deviation; an affine
    fit through the extreme eigenvalues is reported alongside so a sign or
    transcription slip in the closed form shows up as a discrepancy.
    """
    mp = boson_to_field(x, y)
    Hb = build_boson_hamiltonian(x, y, N)
    Hs = build_spin_hamiltonian(ModelParams.uniaxial(mp.hx, mp.hz, N))
    rb = dense_hermitian_eigs(Hb)
    rs = dense_hermitian_eigs(Hs)
    eb, es = rb.values, rs.values
    mapped = mp.scale * es + mp.shift(N)
    dev = float(np.max(np.abs(eb - mapped)))
    fit_scale = (eb[-1] - eb[0]) / (es[-1] - es[0])
    fit_shift = eb[0] - fit_scale * es[0]
    ob = boson_order_parameter(DickeVector(N, rb.vectors[:, 0]))
    os_ = boson_order_parameter(DickeVector(N, rs.vectors[:, 0]), mp)
    return BosonMapReport(
        x=float(x), y=float(y), N=int(N), hx=mp.hx, hz=mp.hz, scale=mp.scale,
        shift=mp.shift(N), x_c=mp.x_c, max_deviation=dev, fit_scale=float(fit_scale),
        fit_shift=float(fit_shift), order_parameter_boson=ob, order_parameter_spin=os_,
    )
