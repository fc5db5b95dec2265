"""Monte Carlo harness: ensemble curves, saturation times, fits and G distributions."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .groverian import OptimizerOptions, p_max
from .measures import average_bipartite_Q
from .sampling import Geometry, make_rng
from .scheme import SchemeConfig, default_record_times, run_trajectory

__all__ = [
    "EnsembleStats",
    "Histogram",
    "PolyFit",
    "Saturation",
    "SaturationRow",
    "fit_polynomial",
    "histogram_density",
    "ks_convergence",
    "monte_carlo",
    "random_q_mean",
    "random_state_baseline",
    "saturation_study",
    "saturation_time",
]

MEASURES = ("K", "Q", "G")
STREAM_BASELINE_STATE = 2
STREAM_BASELINE_OPTIMIZER = 3
_SAME_VALUE_RTOL = 1e-12


def random_q_mean(n: int) -> float:
    """Mean Q of Haar-random n-qubit pure states, (2^n - 2) / (2^n + 1)."""
    return (2.0**n - 2.0) / (2.0**n + 1.0)


def _map_ordered(fn, items, threads: int):
    items = list(items)
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


@dataclass
class EnsembleStats:
    """Per recorded step: mean and standard error of K, Q, G over R runs.

    ``samples[m]`` holds the raw (R, T) values for measure m. Runs with
    infinite K at a step are left out of that step's K mean; the number
    left out is ``k_excluded``. G columns are NaN where G was not evaluated.
    """

    times: np.ndarray
    realizations: int
    mean: dict
    sem: dict
    k_excluded: np.ndarray
    samples: dict = field(repr=False)

    def series(self, measure: str):
        """(times, means) restricted to steps where ``measure`` was evaluated."""
        m = self.mean[measure]
        ok = ~np.isnan(m)
        return self.times[ok], m[ok]


def _mean_sem(values: np.ndarray):
    # values: (R, T); nan/inf entries are dropped per column
    finite = np.isfinite(values)
    count = finite.sum(axis=0)
    mean = np.full(values.shape[1], np.nan)
    sem = np.full(values.shape[1], np.nan)
    for k in range(values.shape[1]):
        col = values[finite[:, k], k]
        if col.size:
            mean[k] = col.mean()
        if col.size >= 2:
            sem[k] = col.std(ddof=1) / math.sqrt(col.size)
    return mean, sem, count


def aggregate(times, samples: dict) -> EnsembleStats:
    R = next(iter(samples.values())).shape[0]
    if R < 2:
        raise ValueError("need at least two realizations")
    mean, sem = {}, {}
    for m in MEASURES:
        mean[m], sem[m], _ = _mean_sem(samples[m])
    k_excluded = np.isinf(samples["K"]).sum(axis=0)
    return EnsembleStats(times=np.asarray(times), realizations=R, mean=mean, sem=sem,
                         k_excluded=k_excluded, samples=samples)


def monte_carlo(config: SchemeConfig, realizations: int, record_times=None,
                groverian_options: OptimizerOptions | None = None, g_times=None,
                threads: int = 1) -> EnsembleStats:
    """Run ``realizations`` independent trajectories and aggregate them in run order.

    Run ``r`` draws from its own substream, so the result does not depend on
    ``threads``. ``record_times`` defaults to every step; ``g_times`` to
    :func:`default_record_times` when ``groverian_options`` is given.
    """
    if realizations < 2:
        raise ValueError("need at least two realizations")
    if record_times is None:
        record_times = list(range(config.total_steps + 1))
    if groverian_options is not None and g_times is None:
        g_times = [t for t in default_record_times(config.total_steps) if t in set(record_times)]

    def one(r):
        return run_trajectory(config, record_times, groverian_options, g_times, run_index=r)

    trajs = _map_ordered(one, range(realizations), threads)
    samples = {m: np.stack([getattr(tr, m) for tr in trajs]) for m in MEASURES}
    return aggregate(trajs[0].times, samples)


@dataclass
class Saturation:
    value: float
    t_star: float  # nan when undetected
    detected: bool


def saturation_time(times, means, fraction: float = 0.9, tail_window: int | None = None,
                    interpolate: bool = False) -> Saturation:
    """Saturation value (mean of the last ``tail_window`` points) and persistent crossing time.

    t* is the first recorded step from which the curve stays at or above
    ``fraction`` times the saturation value. ``tail_window`` defaults to the
    last 20% of the points. With ``interpolate`` the crossing is placed by
    linear interpolation between that step and the recorded step before it,
    which removes the grid quantization of t*.
    """
    times = np.asarray(times)
    means = np.asarray(means, dtype=float)
    if not 0 < fraction < 1:
        raise ValueError("fraction must lie in (0, 1)")
    if tail_window is None:
        tail_window = max(1, int(math.ceil(0.2 * means.size)))
    if tail_window < 1 or means.size < tail_window:
        raise ValueError("series shorter than the tail window")
    value = float(means[-tail_window:].mean())
    above = means >= fraction * value
    if not above[-1]:
        return Saturation(value, math.nan, False)
    below = np.flatnonzero(~above)
    first = 0 if below.size == 0 else below[-1] + 1
    t_star = float(times[first])
    if interpolate and first > 0:
        y0, y1 = means[first - 1], means[first]
        t0 = float(times[first - 1])
        t_star = t0 + (fraction * value - y0) / (y1 - y0) * (t_star - t0)
    return Saturation(value, t_star, True)


@dataclass
class PolyFit:
    coefficients: np.ndarray  # ascending powers: c0 + c1 x + c2 x^2 ...
    rss: float
    r2: float

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)


def fit_polynomial(xs, ys, degree: int) -> PolyFit:
    """Least-squares polynomial of degree 1 or 2 via normal equations on centered x."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if degree not in (1, 2):
        raise ValueError("degree must be 1 or 2")
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-D arrays of equal length")
    if xs.size < degree + 2:
        raise ValueError(f"need at least {degree + 2} points for a degree-{degree} fit")
    shift = xs.mean()
    u = xs - shift
    V = np.vander(u, degree + 1, increasing=True)
    c = np.linalg.solve(V.T @ V, V.T @ ys)
    # expand sum c_k (x - shift)^k back into powers of x
    coef = np.zeros(degree + 1)
    for k, ck in enumerate(c):
        for j in range(k + 1):
            coef[j] += ck * math.comb(k, j) * (-shift) ** (k - j)
    resid = ys - V @ c
    rss = float(resid @ resid)
    tss = float(((ys - ys.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    return PolyFit(coefficients=coef, rss=rss, r2=r2)


@dataclass
class Histogram:
    edges: np.ndarray
    density: np.ndarray
    degenerate: bool = False

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)


def histogram_density(samples, bin_count: int, value_range=None) -> Histogram:
    """Uniform-width histogram normalized to unit integral.

    Bins span ``value_range`` (default: sample min to max). Samples that agree
    to round-off (spread below 1e-12 relative) give a single unit-width bin
    centred on their mean, flagged ``degenerate``.
    """
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two samples")
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    lo, hi = (x.min(), x.max()) if value_range is None else value_range
    if hi - lo <= _SAME_VALUE_RTOL * max(1.0, abs(hi), abs(lo)):
        c = float(x.mean())
        return Histogram(edges=np.array([c - 0.5, c + 0.5]), density=np.array([1.0]), degenerate=True)
    counts, edges = np.histogram(x, bins=bin_count, range=(lo, hi))
    width = (hi - lo) / bin_count
    return Histogram(edges=edges, density=counts / (counts.sum() * width))


def random_state_baseline(n: int, samples: int, groverian_options: OptimizerOptions | None = None,
                          seed: int = 0, threads: int = 1, groverian: bool = True):
    """Q and G of ``samples`` Haar-random states (normalized complex Gaussian amplitudes).

    Sample ``i`` depends only on ``(seed, i)``. With ``groverian=False`` the
    G samples are NaN and no optimization is run.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    options = groverian_options or OptimizerOptions()

    def one(i):
        rng = make_rng(seed, i, STREAM_BASELINE_STATE)
        z = rng.standard_normal((2, 2**n))
        psi = z[0] + 1j * z[1]
        psi /= np.linalg.norm(psi)
        if not groverian:
            return average_bipartite_Q(psi), math.nan
        pm = p_max(psi, options, make_rng(seed, i, STREAM_BASELINE_OPTIMIZER)).p_max
        return average_bipartite_Q(psi), -math.log(pm)

    out = np.array(_map_ordered(one, range(samples), threads)).reshape(samples, 2)
    return out[:, 0], out[:, 1]


def ks_convergence(series: dict, reference) -> dict:
    """Two-sample KS statistic and p-value of each labelled sample set against ``reference``."""
    return {label: stats.ks_2samp(x, reference) for label, x in series.items()}


@dataclass
class SaturationRow:
    n: int
    geometry: Geometry
    measure: str
    saturation_value: float
    t_star: float
    detected: bool
    t_star_sem: float


def _batch_sem(times, values, fraction, tail_window, batches, interpolate=False):
    # t* recomputed on contiguous run batches; nan when any batch never saturates
    R = values.shape[0]
    edges = np.linspace(0, R, batches + 1).astype(int)
    ts = []
    for a, b in zip(edges[:-1], edges[1:]):
        block = values[a:b]
        finite = np.where(np.isfinite(block), block, np.nan)
        s = saturation_time(times, np.nanmean(finite, axis=0), fraction, tail_window, interpolate)
        if not s.detected:
            return math.nan
        ts.append(s.t_star)
    return float(np.std(ts, ddof=1) / math.sqrt(batches))


def saturation_rows(ens: EnsembleStats, n: int, geometry, fraction: float = 0.9,
                    tail_fraction: float = 0.2, batches: int = 10,
                    interpolate: bool = False) -> list[SaturationRow]:
    """Saturation value and time for each measure of one ensemble.

    The standard error of t* comes from ``batches`` contiguous batches of runs.
    """
    rows = []
    for m in MEASURES:
        t, y = ens.series(m)
        if t.size == 0:
            continue
        window = max(1, int(math.ceil(tail_fraction * t.size)))
        s = saturation_time(t, y, fraction, window, interpolate)
        cols = np.isin(ens.times, t)
        sem = (_batch_sem(t, ens.samples[m][:, cols], fraction, window, batches, interpolate)
               if batches >= 2 else math.nan)
        rows.append(SaturationRow(n, Geometry.parse(geometry), m, s.value, s.t_star, s.detected, sem))
    return rows


def saturation_study(ns, geometries, steps_for_n, realizations: int, seed: int,
                     groverian_options: OptimizerOptions | None, fraction: float = 0.9,
                     tail_fraction: float = 0.2, record_every: int = 1, g_dense_until: int = 50,
                     g_every: int = 5, batches: int = 10, threads: int = 1, progress=None,
                     interpolate: bool = False):
    """Saturation rows for every (n, geometry) plus degree-1/2 fits of t* against n.

    ``steps_for_n`` maps n to the number of steps simulated for that n.
    Returns ``(rows, fits)`` with ``fits[(geometry, measure)] = {1: PolyFit, 2: PolyFit}``.
    """
    rows = []
    for n in ns:
        steps = int(steps_for_n(n))
        record = list(range(0, steps + 1, record_every))
        if record[-1] != steps:
            record.append(steps)
        g_times = [t for t in default_record_times(steps, g_dense_until, g_every) if t in set(record)]
        for geometry in geometries:
            cfg = SchemeConfig(n, geometry, steps, seed)
            ens = monte_carlo(cfg, realizations, record, groverian_options, g_times, threads)
            rows.extend(saturation_rows(ens, n, geometry, fraction, tail_fraction, batches, interpolate))
            if progress is not None:
                progress(n, Geometry.parse(geometry))
    fits = {}
    for geometry in map(Geometry.parse, geometries):
        for m in MEASURES:
            sel = [r for r in rows if r.geometry is geometry and r.measure == m and r.detected]
            xs = np.array([r.n for r in sel], dtype=float)
            ys = np.array([r.t_star for r in sel])
            fits[(geometry, m)] = {d: fit_polynomial(xs, ys, d) for d in (1, 2) if xs.size >= d + 2}
    return rows, fits
