"""Benchmark harness: UGC against in-repo baselines on edge-list datasets.

Datasets are edge-list files, or synthetic specs of the form
``er:<n>:<p>[:<seed>]`` which are generated in memory.  Nothing is downloaded.

CSV columns::

    dataset, n, edges, method, k, mode, output_bits,
    ratio_n2, ratio_pairs, ratio_file, wall_seconds, verified

ratio_n2 divides by n^2 bits (full matrix), ratio_pairs by n(n-1)/2 bits,
ratio_file by 8 x the edge-list size in bytes.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, TextIO

from . import baselines, container
from .errors import UgcError
from .graph import LabeledGraph, read_edgelist, write_edgelist
from .probmodel import Mode
from .sbm import erdos_renyi, sample_sbm

log = logging.getLogger(__name__)

METHODS = ("ugc", "csr", "lz78")


@dataclass
class BenchRow:
    dataset: str
    n: int
    edges: int
    method: str
    k: int | None
    mode: str | None
    output_bits: int
    ratio_n2: float
    ratio_pairs: float
    ratio_file: float
    wall_seconds: float
    verified: bool | None


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def best_ugc_ratio(self, dataset: str) -> float:
        return min(r.ratio_n2 for r in self.rows if r.dataset == dataset and r.method == "ugc")

    def to_csv(self, fh: TextIO) -> None:
        names = [f.name for f in dataclasses.fields(BenchRow)]
        w = csv.DictWriter(fh, fieldnames=names, lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(dataclasses.asdict(r))

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()

    def format_table(self) -> str:
        head = f"{'dataset':<20} {'method':<6} {'k':>2} {'mode':<8} {'bits':>12} " \
               f"{'ratio n^2':>11} {'ratio C(n,2)':>13} {'ratio file':>11} {'sec':>7}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lines.append(
                f"{r.dataset[:20]:<20} {r.method:<6} {r.k if r.k is not None else '-':>2} "
                f"{r.mode or '-':<8} {r.output_bits:>12} {r.ratio_n2:>11.5g} "
                f"{r.ratio_pairs:>13.5g} {r.ratio_file:>11.5g} {r.wall_seconds:>7.2f}")
        return "\n".join(lines)


def load_dataset(spec: str) -> tuple[str, LabeledGraph, int]:
    """Return (name, graph, edge-list size in bytes)."""
    if spec.startswith("er:"):
        parts = spec.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"synthetic dataset spec must be er:<n>:<p>[:<seed>], got {spec!r}")
        n, p = int(parts[1]), float(parts[2])
        seed = int(parts[3]) if len(parts) == 4 else 0
        g, _ = sample_sbm(erdos_renyi(n, p), seed)
        return spec, g, len(write_edgelist(g).encode())
    path = Path(spec)
    try:
        g = read_edgelist(path)
        size = path.stat().st_size
    except OSError as exc:
        raise UgcError(f"{spec}: {exc}") from exc
    except UgcError as exc:
        raise type(exc)(f"{spec}: {exc}") from exc
    return path.name, g, size


def _row(name, g, file_bytes, method, k, mode, bits, seconds, verified) -> BenchRow:
    n = g.n
    pairs = max(1, n * (n - 1) // 2)
    return BenchRow(name, n, g.num_edges(), method, k, mode, int(bits),
                    bits / (n * n), bits / pairs, bits / (8 * file_bytes) if file_bytes else float("nan"),
                    seconds, verified)


def run_bench(datasets: Sequence[str], ks: Sequence[int] = (1, 2, 3, 4),
              modes: Sequence[Mode | str] = (Mode.KT,),
              methods: Sequence[str] = METHODS) -> BenchReport:
    """Compress every dataset with every requested method.

    Each UGC entry is decompressed and compared with the input before it is
    recorded; a mismatch raises.
    """
    unknown = set(methods) - set(METHODS)
    if unknown:
        raise ValueError(f"unknown methods {sorted(unknown)}; choose from {METHODS}")
    report = BenchReport()
    for spec in datasets:
        name, g, file_bytes = load_dataset(spec)
        log.info("dataset %s: n=%d edges=%d", name, g.n, g.num_edges())
        if "ugc" in methods:
            for mode in modes:
                mode = Mode.parse(mode)
                for k in ks:
                    t0 = time.perf_counter()
                    blob = container.compress(g, k, mode)
                    elapsed = time.perf_counter() - t0
                    if container.decompress(blob) != g:
                        raise UgcError(f"{name}: round trip failed for k={k}, mode={mode.value}")
                    report.rows.append(_row(name, g, file_bytes, "ugc", k, mode.value,
                                            8 * len(blob), elapsed, True))
        if "csr" in methods:
            t0 = time.perf_counter()
            bits = baselines.csr_size_bits(g)
            report.rows.append(_row(name, g, file_bytes, "csr", None, None, bits,
                                    time.perf_counter() - t0, None))
        if "lz78" in methods:
            t0 = time.perf_counter()
            bits = baselines.hilbert_lz78_size_bits(g)
            report.rows.append(_row(name, g, file_bytes, "lz78", None, None, bits,
                                    time.perf_counter() - t0, None))
    return report
