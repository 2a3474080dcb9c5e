"""Critical-value table generation, CSV persistence, and keyed lookup.

A table holds one cell per (method, n, n_f, q).  The default grid covers
n = 3..26 with n_f = 0..max(3, floor(n/3)), matching the published layout.
Cell values are canonicalized to six significant digits on creation so that
serialization is an identity: rewriting a parsed file reproduces it byte for
byte, and regeneration with the same seed is byte-identical regardless of
worker count.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

from . import __version__
from .estimation import EXACT, SIMULATED, QuantileEstimate, simulate_quantiles
from .exact import exact_quantile, has_exact_quantile
from .methods import Method, MethodSpec, parse_method
from .sampling import (
    DEFAULT_N_REPLICAS,
    DEFAULT_N_SAMPLES,
    DEFAULT_Q_LEVELS,
    DEFAULT_SEED,
    SimConfig,
)
from .special import DomainError

__all__ = [
    "TableCell",
    "CriticalValueTable",
    "TableLookupError",
    "TableParseError",
    "TableGenerationError",
    "default_grid",
    "generate_table",
    "write_csv",
    "read_csv",
    "lookup",
    "render_text",
]

_HEADER = "method,n,n_f,q,estimate,stderr,provenance"


class TableLookupError(KeyError):
    """Requested key is not in the table; no interpolation is attempted."""


class TableParseError(ValueError):
    """Malformed CSV row; carries the offending line number."""


class TableGenerationError(RuntimeError):
    """One or more grid cells failed; carries per-cell reports."""

    def __init__(self, failures):
        self.failures = list(failures)
        lines = "; ".join(f"(n={n}, n_f={n_f}): {msg}" for n, n_f, msg in self.failures)
        super().__init__(f"table generation failed for {len(self.failures)} cell(s): {lines}")


def _canonical(x: float | None) -> float | None:
    # six significant digits, one more than the published tables print
    return None if x is None else float(f"{x:.6g}")


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.6g}"


@dataclass(frozen=True)
class TableCell:
    method: Method
    n: int
    n_f: int
    q: float
    estimate: float
    stderr: float | None
    provenance: str

    def __post_init__(self):
        # simulated cells may lack a stderr only when R = 1; exact cells never
        # carry one
        if self.provenance == EXACT and self.stderr is not None:
            raise DomainError("exact cells carry no standard error")


@dataclass
class CriticalValueTable:
    """Cells indexed by (method, n, n_f, q) plus generation metadata."""

    cells: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    N: int = DEFAULT_N_SAMPLES
    R: int = DEFAULT_N_REPLICAS
    version: str = __version__

    def add(self, cell: TableCell):
        key = (cell.method, cell.n, cell.n_f, cell.q)
        if key in self.cells:
            raise DomainError(f"duplicate table key {key}")
        self.cells[key] = cell

    def sorted_cells(self):
        return sorted(
            self.cells.values(), key=lambda c: (c.method.token, c.n, c.n_f, c.q)
        )


def default_grid(n_min: int = 3, n_max: int = 26):
    """(n, n_f) pairs of the published grid: n_f runs to max(3, floor(n/3)),
    never past n."""
    if n_min > n_max:
        raise DomainError("need n_min <= n_max")
    if n_min < 1:
        raise DomainError("sample sizes start at 1")
    pairs = []
    for n in range(n_min, n_max + 1):
        cap = min(n, max(3, n // 3))
        pairs.extend((n, n_f) for n_f in range(cap + 1))
    return pairs


def _cell_estimates(spec, n, n_f, N, R, seed, q_list, use_exact):
    if use_exact and has_exact_quantile(spec, n, n_f):
        return [
            QuantileEstimate(q=q, estimate=exact_quantile(spec, n, n_f, q),
                             stderr=None, replicas=0, provenance=EXACT)
            for q in q_list
        ]
    cfg = SimConfig(n=n, n_f=n_f, N=N, R=R, seed=seed, q_list=q_list)
    return simulate_quantiles(spec, cfg)


def _cell_worker(args):
    spec, n, n_f, N, R, seed, q_list, use_exact = args
    try:
        return n, n_f, _cell_estimates(spec, n, n_f, N, R, seed, q_list, use_exact), None
    except Exception as err:  # reported per cell by the caller
        return n, n_f, None, f"{type(err).__name__}: {err}"


def generate_table(
    spec: MethodSpec,
    n_min: int = 3,
    n_max: int = 26,
    N: int = DEFAULT_N_SAMPLES,
    R: int = DEFAULT_N_REPLICAS,
    seed: int = DEFAULT_SEED,
    q_list=DEFAULT_Q_LEVELS,
    use_exact: bool = True,
    workers: int = 1,
) -> CriticalValueTable:
    """Build the full critical-value grid for one method.

    Exact cells are used wherever available (unless ``use_exact`` is False);
    everything else runs the full simulation pipeline.  The result is a pure
    function of the arguments: replica substreams are keyed by (seed,
    replica), so the worker count only affects wall time.
    """
    grid = default_grid(n_min, n_max)
    # validate N, R, seed and the q grid once, before fanning out cells
    SimConfig(n=1, n_f=0, N=N, R=R, seed=seed, q_list=q_list)
    jobs = [(spec, n, n_f, N, R, seed, tuple(q_list), use_exact) for n, n_f in grid]

    if workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_cell_worker, jobs))
    else:
        results = [_cell_worker(job) for job in jobs]

    failures = [(n, n_f, msg) for n, n_f, _, msg in results if msg is not None]
    if failures:
        raise TableGenerationError(failures)

    table = CriticalValueTable(seed=seed, N=N, R=R)
    for n, n_f, estimates, _ in results:
        for est in estimates:
            table.add(
                TableCell(
                    method=spec.method,
                    n=n,
                    n_f=n_f,
                    q=est.q,
                    estimate=_canonical(est.estimate),
                    stderr=_canonical(est.stderr),
                    provenance=est.provenance,
                )
            )
    return table


def write_csv(table: CriticalValueTable, path):
    """Serialize with `#` metadata comments and canonical float formatting."""
    with open(path, "w", newline="") as f:
        f.write(f"# seed={table.seed}\n")
        f.write(f"# N={table.N}\n")
        f.write(f"# R={table.R}\n")
        f.write(f"# version={table.version}\n")
        f.write(_HEADER + "\n")
        for c in table.sorted_cells():
            f.write(
                f"{c.method.token},{c.n},{c.n_f},{c.q!r},"
                f"{_fmt(c.estimate)},{_fmt(c.stderr)},{c.provenance}\n"
            )


def read_csv(path) -> CriticalValueTable:
    """Parse a table written by ``write_csv``; the round trip is lossless."""
    table = CriticalValueTable(version="")
    meta = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" not in body:
                    raise TableParseError(f"line {lineno}: malformed metadata {line!r}")
                key, val = body.split("=", 1)
                meta[key.strip()] = val.strip()
                continue
            if line == _HEADER:
                continue
            parts = line.split(",")
            if len(parts) != 7:
                raise TableParseError(f"line {lineno}: expected 7 fields, got {len(parts)}")
            try:
                cell = TableCell(
                    method=parse_method(parts[0]),
                    n=int(parts[1]),
                    n_f=int(parts[2]),
                    q=float(parts[3]),
                    estimate=float(parts[4]),
                    stderr=float(parts[5]) if parts[5] else None,
                    provenance=parts[6],
                )
            except (ValueError, DomainError) as err:
                raise TableParseError(f"line {lineno}: {err}") from err
            if cell.provenance not in (EXACT, SIMULATED):
                raise TableParseError(f"line {lineno}: unknown provenance {parts[6]!r}")
            table.add(cell)
    if "seed" in meta:
        table.seed = int(meta["seed"], 0)
    if "N" in meta:
        table.N = int(meta["N"])
    if "R" in meta:
        table.R = int(meta["R"])
    table.version = meta.get("version", "")
    return table


def lookup(table: CriticalValueTable, method: Method, n: int, n_f: int, q: float) -> TableCell:
    """Exact key match only; a miss names the nearest available keys."""
    key = (method, int(n), int(n_f), float(q))
    try:
        return table.cells[key]
    except KeyError:
        pass
    rows = [k for k in table.cells if k[0] is method]
    if not rows:
        raise TableLookupError(f"table holds no cells for method {method.token!r}")
    ns = sorted({k[1] for k in rows})
    if n not in ns:
        raise TableLookupError(
            f"no cells for n={n} (method {method.token}); available n: {ns[0]}..{ns[-1]}"
        )
    nfs = sorted({k[2] for k in rows if k[1] == n})
    if n_f not in nfs:
        raise TableLookupError(
            f"no cells for n_f={n_f} at n={n}; available n_f: {nfs}"
        )
    qs = sorted({k[3] for k in rows if k[1] == n and k[2] == n_f})
    nearest = min(qs, key=lambda v: abs(v - q))
    raise TableLookupError(
        f"no cell at q={q!r} for (n={n}, n_f={n_f}); nearest tabulated q is {nearest!r} "
        f"of {[repr(v) for v in qs]}"
    )


def render_text(table: CriticalValueTable) -> str:
    """Plain-text rendering in the published layout, `estimate (stderr)` per
    cell, for visual diffing."""
    out = []
    methods = sorted({k[0] for k in table.cells}, key=lambda m: m.token)
    for method in methods:
        cells = [c for c in table.sorted_cells() if c.method is method]
        qs = sorted({c.q for c in cells})
        out.append(f"method={method.token} seed={table.seed} N={table.N} R={table.R}")
        out.append("n n_f " + " ".join(f"{q:g}" for q in qs))
        by_row = {}
        for c in cells:
            by_row.setdefault((c.n, c.n_f), {})[c.q] = c
        for (n, n_f) in sorted(by_row):
            row = by_row[(n, n_f)]
            rendered = []
            for q in qs:
                c = row.get(q)
                if c is None:
                    rendered.append("-")
                elif c.stderr is None:
                    rendered.append(f"{c.estimate:g}")
                else:
                    rendered.append(f"{c.estimate:g} ({c.stderr:g})")
            out.append(f"{n} {n_f} " + " ".join(rendered))
        out.append("")
    return "\n".join(out)
