"""Deterministic, parallel Monte Carlo experiment harness.

Experiments draw independent polynomials with per-sample derived seeds and
aggregate a per-sample statistic. Samples are processed in fixed-size index
blocks; workers only decide who computes which block, so a report is
bit-identical across worker counts. Aggregation runs over the index-ordered
record array with pairwise summation, which is likewise order-insensitive.

Kinds
-----
concentration   disk root count minus n/2, by root finding or by the
                annulus (Jensen) counter
mahler          normalized log-integral at the working radius (its mean
                tends to -gamma/2, its second moment to gamma^2/4, and
                exp of it is M(P)/sqrt(n) at r = 1)
clt             squared normalized field values at a fixed angle, with the
                Kolmogorov distance to the exponential law
smallball       per-sample circle fraction where |P| <= a
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator

import numpy as np

from . import probes
from .logint import default_floor, default_nodes, log_integral, jensen_count
from .poly import LittlewoodPoly, pattern_from_index, sample, sigma_sq
from .rng import derive_seed
from .roots import count_in_disk, find_roots

#: fixed sample block; the unit of work distribution
BLOCK = 64

#: half-width of the default Jensen counting annulus around the unit circle
JENSEN_DELTA = 1e-3

#: a sample is flagged when some root modulus is this close to a counting
#: radius (the annulus counter is untrustworthy there)
JENSEN_RADIUS_MARGIN = 1e-3

KINDS = ("concentration", "mahler", "clt", "smallball")
COUNTING_METHODS = ("roots", "jensen")

ENV_WORKERS = "LITTLEWOOD_WORKERS"


@dataclass(frozen=True)
class ExperimentSpec:
    """Full description of one experiment; everything needed to reproduce it."""

    kind: str
    n: int
    m: int
    seed: int
    radius: float = 1.0
    nodes: int | None = None
    counting_method: str = "roots"
    floor: float | None = None
    theta: float = 1.0
    phi: float = 2.0
    a: float = 0.1
    band_eps: float = 1e-8
    r_lo: float | None = None
    r_hi: float | None = None
    all_patterns: bool = False
    bin_width: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}")
        if self.counting_method not in COUNTING_METHODS:
            raise ValueError(f"counting_method must be one of {COUNTING_METHODS}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.kind == "concentration" and self.n < 2:
            raise ValueError("concentration needs degree >= 1, so n >= 2")
        if self.all_patterns:
            if self.kind != "concentration":
                raise ValueError("all_patterns mode applies to the concentration kind")
            if self.n > 24:
                raise ValueError("all_patterns enumeration capped at n <= 24")
        elif self.m < 1:
            raise ValueError("m must be >= 1")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.nodes is not None and self._uses_quadrature() and self.nodes < 4 * self.n:
            raise ValueError(f"nodes must be >= 4n = {4 * self.n} for quadrature")
        if (self.r_lo is None) != (self.r_hi is None):
            raise ValueError("give both r_lo and r_hi or neither")
        if self.r_lo is not None and not 0 < self.r_lo < self.r_hi:
            raise ValueError("radii must satisfy 0 < r_lo < r_hi")

    def _uses_quadrature(self) -> bool:
        return self.kind == "mahler" or (
            self.kind == "concentration" and self.counting_method == "jensen"
        )

    @property
    def sample_count(self) -> int:
        return (1 << self.n) if self.all_patterns else self.m

    def jensen_radii(self) -> tuple[float, float]:
        if self.r_lo is not None:
            return self.r_lo, self.r_hi
        return 1.0 - JENSEN_DELTA, 1.0 + JENSEN_DELTA

    def jensen_nodes(self) -> int:
        # the thin annulus needs more angular resolution than plain circle
        # averages; the analytic strip width is about JENSEN_DELTA
        return max(self.nodes or 0, 16384, default_nodes(self.n))

    def quadrature_nodes(self) -> int:
        return self.nodes if self.nodes is not None else default_nodes(self.n)

    def effective_floor(self) -> float:
        return self.floor if self.floor is not None else default_floor(self.n)


# ---------------------------------------------------------------------------
# per-block statistics (top-level functions: picklable for worker processes)
# ---------------------------------------------------------------------------

def _poly_for_index(spec: ExperimentSpec, idx: int) -> LittlewoodPoly:
    if spec.all_patterns:
        return pattern_from_index(spec.n, idx)
    return sample(spec.n, derive_seed(spec.seed, idx))


def _jensen_statistic(spec: ExperimentSpec, p: LittlewoodPoly) -> float:
    r_lo, r_hi = spec.jensen_radii()
    return jensen_count(p, r_lo, r_hi, N=spec.jensen_nodes())


def _concentration_block(spec: ExperimentSpec, i0: int, i1: int):
    values = np.empty(i1 - i0, dtype=np.float64)
    flags: list[str] = []
    half_n = spec.n / 2.0
    r_lo, r_hi = spec.jensen_radii()
    for idx in range(i0, i1):
        p = _poly_for_index(spec, idx)
        sample_flags: list[str] = []
        if spec.counting_method == "roots":
            rs = find_roots(p)
            if rs.fully_converged:
                dc = count_in_disk(rs, spec.band_eps)
                stat = dc.disk_statistic()
                mods = np.abs(rs.roots)
                near = min(
                    float(np.min(np.abs(mods - r_lo))),
                    float(np.min(np.abs(mods - r_hi))),
                )
                if near <= JENSEN_RADIUS_MARGIN:
                    sample_flags.append("near_radius")
            else:
                # failure policy: fall back to the annulus counter, flagged
                stat = _jensen_statistic(spec, p)
                sample_flags.append("nonconverged")
                sample_flags.append("jensen_fallback")
        else:
            stat = _jensen_statistic(spec, p)
        values[idx - i0] = stat - half_n
        flags.append(";".join(sample_flags))
    return values, flags


def _mahler_block(spec: ExperimentSpec, i0: int, i1: int):
    values = np.empty(i1 - i0, dtype=np.float64)
    flags: list[str] = []
    norm = 0.5 * math.log(sigma_sq(spec.n, spec.radius))
    for idx in range(i0, i1):
        p = _poly_for_index(spec, idx)
        li = log_integral(p, spec.radius, N=spec.quadrature_nodes(), floor=spec.effective_floor())
        values[idx - i0] = li.value - norm
        flags.append("clamped" if li.singular_nodes > 0 else "")
    return values, flags


def _clt_block(spec: ExperimentSpec, i0: int, i1: int):
    values = probes.sq_samples_block(spec.n, spec.radius, spec.theta, spec.seed, i0, i1)
    return values, [""] * (i1 - i0)


def _smallball_block(spec: ExperimentSpec, i0: int, i1: int):
    nodes = spec.nodes if spec.nodes is not None else max(512, 4 * spec.n)
    values = probes.small_ball_fractions_block(
        spec.n, spec.radius, spec.a, nodes, spec.seed, i0, i1
    )
    return values, [""] * (i1 - i0)


_BLOCK_FNS = {
    "concentration": _concentration_block,
    "mahler": _mahler_block,
    "clt": _clt_block,
    "smallball": _smallball_block,
}


def _compute_block(args):
    spec, i0, i1 = args
    return _BLOCK_FNS[spec.kind](spec, i0, i1)


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

QUANTILES = (0.01, 0.05, 0.25, 0.50, 0.75, 0.95, 0.99)


@dataclass
class RunReport:
    """Per-sample records plus aggregates of one experiment run.

    The primary serializations (JSON/CSV/JSONL) exclude wall time so that
    output files are byte-identical across reruns and worker counts.
    """

    spec: ExperimentSpec
    values: np.ndarray
    flags: list[str]
    aggregates: dict
    histogram_edges: np.ndarray
    histogram_counts: np.ndarray
    failure_count: int
    degraded: bool
    wall_time_s: float = field(default=0.0, compare=False)

    def to_json_dict(self, include_timing: bool = False) -> dict:
        d = {
            "spec": asdict(self.spec),
            "aggregates": self.aggregates,
            "histogram": {
                "edges": self.histogram_edges.tolist(),
                "counts": self.histogram_counts.tolist(),
            },
            "failure_count": self.failure_count,
            "degraded": self.degraded,
            "samples": [
                {"index": i, "value": float(v), "flags": f}
                for i, (v, f) in enumerate(zip(self.values, self.flags))
            ],
        }
        if include_timing:
            d["wall_time_s"] = self.wall_time_s
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_json_dict(include_timing), indent=2)

    def to_csv(self) -> str:
        lines = ["index,value,flags"]
        lines += [f"{i},{v!r},{f}" for i, (v, f) in enumerate(zip(self.values, self.flags))]
        return "\n".join(lines) + "\n"

    def to_jsonl_lines(self) -> Iterator[str]:
        yield json.dumps({"spec": asdict(self.spec)})
        for i, (v, f) in enumerate(zip(self.values, self.flags)):
            yield json.dumps({"index": i, "value": float(v), "flags": f})
        yield json.dumps(
            {
                "aggregates": self.aggregates,
                "failure_count": self.failure_count,
                "degraded": self.degraded,
            }
        )

    def to_jsonl(self) -> str:
        return "\n".join(self.to_jsonl_lines()) + "\n"


def _histogram(values: np.ndarray, bin_width: float | None):
    if values.size == 0:
        return np.array([0.0, 1.0]), np.array([0])
    if np.ptp(values) == 0.0:
        v = float(values[0])
        w = bin_width if bin_width else 1.0
        return np.array([v - w / 2, v + w / 2]), np.array([values.size])
    if bin_width is not None:
        if bin_width <= 0:
            raise ValueError("bin_width must be positive")
        lo, hi = float(values.min()), float(values.max())
        nbins = max(1, int(math.ceil((hi - lo) / bin_width)))
        edges = lo + bin_width * np.arange(nbins + 1)
        counts, edges = np.histogram(values, bins=edges)
    else:
        counts, edges = np.histogram(values, bins="fd")
    return edges, counts


def _aggregate(spec: ExperimentSpec, values: np.ndarray, flags: list[str]) -> dict:
    m = values.size
    mean = float(np.sum(values) / m)
    var = float(np.sum((values - mean) ** 2) / (m - 1)) if m > 1 else 0.0
    agg = {
        "count": m,
        "mean": mean,
        "variance": var,
        "std_error": math.sqrt(var / m) if m > 1 else 0.0,
        "min": float(values.min()),
        "max": float(values.max()),
        "quantiles": {
            f"{int(q * 100)}": float(np.quantile(values, q)) for q in QUANTILES
        },
    }
    n = spec.n
    if spec.kind == "concentration":
        # values are nu - n/2; record both candidate deviation scales
        nu = values + n / 2.0
        agg["mean_disk_fraction"] = float(np.sum(nu) / (m * n))
        agg["frac_within_n_09"] = float(np.mean(np.abs(values) <= n**0.9))
        agg["frac_within_sqrt_n"] = float(np.mean(np.abs(values) <= math.sqrt(n)))
        agg["deviation_scale_n_09"] = n**0.9
        agg["deviation_scale_sqrt_n"] = math.sqrt(n)
    elif spec.kind == "mahler":
        agg["second_moment"] = float(np.sum(values**2) / m)
        agg["median_mahler_ratio"] = float(np.exp(np.quantile(values, 0.5)))
    elif spec.kind == "clt":
        agg["ks_distance_exponential"] = probes.kolmogorov_distance_exponential(values)
        agg["clt_regime_ok"] = probes.clt_regime_ok(n, spec.theta)
    elif spec.kind == "smallball":
        agg["estimate"] = mean
        agg["estimate_std_error"] = agg["std_error"]
        agg["a"] = spec.a
    return agg


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get(ENV_WORKERS, "1"))
    if workers < 1:
        raise ValueError("workers must be >= 1")
    return workers


def run(spec: ExperimentSpec, workers: int | None = None) -> RunReport:
    """Execute an experiment; deterministic for fixed spec, any worker count.

    Per-sample failures are recorded and flagged, never dropped; a failure
    rate above 1 percent marks the report degraded.
    """
    workers = resolve_workers(workers)
    total = spec.sample_count
    t0 = time.perf_counter()
    blocks = [(spec, i0, min(i0 + BLOCK, total)) for i0 in range(0, total, BLOCK)]
    if workers == 1 or len(blocks) == 1:
        results = [_compute_block(b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_compute_block, blocks))
    values = np.concatenate([r[0] for r in results])
    flags: list[str] = []
    for r in results:
        flags.extend(r[1])
    wall = time.perf_counter() - t0

    failure_count = sum(1 for f in flags if "nonconverged" in f)
    degraded = failure_count > 0.01 * total
    aggregates = _aggregate(spec, values, flags)
    edges, counts = _histogram(values, spec.bin_width)
    return RunReport(
        spec=spec,
        values=values,
        flags=flags,
        aggregates=aggregates,
        histogram_edges=edges,
        histogram_counts=counts,
        failure_count=failure_count,
        degraded=degraded,
        wall_time_s=wall,
    )
