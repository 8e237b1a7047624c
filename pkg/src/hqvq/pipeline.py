"""End-to-end codec pipeline: block encoding, index streams, stats and reports."""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .codebook import Codebook, distances_to_codebook
from .encoder import (
    EncodePath,
    EncoderConfig,
    Region,
    encode,
    region_of,
)
from .grover import derive_rng
from .image import BlockGeometry, blockify, deblockify
from .neighborhood import NeighborhoodTable

STREAM_MAGIC = b"VQIX"
STREAM_VERSION = 1
MAX_CODEBOOK_SIZE = 65536


@dataclass(frozen=True, eq=False)
class IndexStream:
    """Encoded image: one codebook index per block, plus geometry to invert it."""

    n_codevectors: int
    block_w: int
    block_h: int
    width: int
    height: int
    indices: np.ndarray  # 1-D uint16, row-major block order

    def __post_init__(self):
        idx = np.array(self.indices, dtype=np.uint16)  # own copy: frozen below
        idx.setflags(write=False)
        object.__setattr__(self, "indices", idx)

    def __eq__(self, other):
        if not isinstance(other, IndexStream):
            return NotImplemented
        return (
            (self.n_codevectors, self.block_w, self.block_h, self.width, self.height)
            == (other.n_codevectors, other.block_w, other.block_h, other.width, other.height)
            and np.array_equal(self.indices, other.indices)
        )

    @property
    def geometry(self) -> BlockGeometry:
        return BlockGeometry(block_w=self.block_w, block_h=self.block_h)

    def expected_blocks(self) -> int:
        return math.ceil(self.height / self.block_h) * math.ceil(self.width / self.block_w)


def serialize_stream(stream: IndexStream) -> bytes:
    """Bit-exact binary format: magic, six u32 LE fields, then u16 LE indices."""
    if stream.n_codevectors > MAX_CODEBOOK_SIZE:
        raise ValueError(f"codebook size {stream.n_codevectors} exceeds {MAX_CODEBOOK_SIZE}")
    if stream.indices.size != stream.expected_blocks():
        raise ValueError("index count does not match image geometry")
    header = STREAM_MAGIC + struct.pack(
        "<6I",
        STREAM_VERSION,
        stream.n_codevectors,
        stream.block_w,
        stream.block_h,
        stream.width,
        stream.height,
    )
    return header + stream.indices.astype("<u2").tobytes()


def parse_stream(data: bytes) -> IndexStream:
    if data[:4] != STREAM_MAGIC:
        raise ValueError("bad magic: not an index stream")
    if len(data) < 4 + 24:
        raise ValueError("truncated index stream header")
    version, n, bw, bh, w, h = struct.unpack("<6I", data[4:28])
    if version != STREAM_VERSION:
        raise ValueError(f"unsupported stream version {version}")
    if bw < 1 or bh < 1 or w < 1 or h < 1:
        raise ValueError("bad geometry fields")
    blocks = math.ceil(h / bh) * math.ceil(w / bw)
    body = data[28:]
    if len(body) != 2 * blocks:
        raise ValueError(f"expected {2 * blocks} index bytes, got {len(body)}")
    indices = np.frombuffer(body, dtype="<u2").astype(np.uint16)
    return IndexStream(
        n_codevectors=n, block_w=bw, block_h=bh, width=w, height=h, indices=indices
    )


@dataclass(frozen=True)
class PartitionStats:
    """Per-run aggregates: region fractions, path counts, and query meters."""

    n_vectors: int
    a: float  # fraction with nearest distance < delta0/2
    b: float  # fraction in the threshold shell
    c: float  # fraction beyond the threshold
    count_sub1: int
    count_sub2: int
    count_fallback: int
    mean_grover_iterations: float
    max_grover_iterations: int
    mean_classical_evals: float
    max_classical_evals: int


def _build_stats(regions, paths, grover_counts, classical_counts) -> PartitionStats:
    total = len(regions)
    grover = np.asarray(grover_counts, dtype=np.float64)
    classical = np.asarray(classical_counts, dtype=np.float64)
    return PartitionStats(
        n_vectors=total,
        a=regions.count(Region.S) / total,
        b=regions.count(Region.T_MINUS_S) / total,
        c=regions.count(Region.I_MINUS_T) / total,
        count_sub1=paths.count(EncodePath.SUB1),
        count_sub2=paths.count(EncodePath.SUB2),
        count_fallback=paths.count(EncodePath.CLASSICAL_FALLBACK),
        mean_grover_iterations=float(grover.mean()),
        max_grover_iterations=int(grover.max()),
        mean_classical_evals=float(classical.mean()),
        max_classical_evals=int(classical.max()),
    )


def encode_vectors(
    vectors: np.ndarray,
    codebook: Codebook,
    table: NeighborhoodTable,
    cfg: EncoderConfig,
) -> tuple[np.ndarray, PartitionStats, list]:
    """Encode a batch of vectors; each gets its own rng stream by ordinal.

    Returns (indices, stats, outcomes).  Region classification reuses the
    distance vector the simulator already needs, so it adds no metered work.
    """
    if vectors.shape[0] < 1:
        raise ValueError("no vectors to encode")
    indices = np.empty(vectors.shape[0], dtype=np.int64)
    regions, paths, grover_counts, classical_counts = [], [], [], []
    outcomes = []
    half = codebook.delta0 / 2.0
    for ordinal in range(vectors.shape[0]):
        x = vectors[ordinal]
        dvec = distances_to_codebook(x, codebook)
        rng = derive_rng(cfg.master_seed, ordinal)
        outcome = encode(x, codebook, table, cfg, rng, dvec=dvec)
        indices[ordinal] = outcome.index
        regions.append(region_of(float(dvec.min()), codebook.delta0, cfg.delta_hat))
        paths.append(outcome.path)
        grover_counts.append(outcome.meter.grover_iterations)
        classical_counts.append(outcome.meter.classical_distance_evals)
        outcomes.append(outcome)
    stats = _build_stats(regions, paths, grover_counts, classical_counts)
    return indices, stats, outcomes


def encode_image(
    img: np.ndarray,
    codebook: Codebook,
    table: NeighborhoodTable,
    cfg: EncoderConfig,
    geom: BlockGeometry = BlockGeometry(),
) -> tuple[IndexStream, PartitionStats]:
    if geom.k != codebook.k:
        raise ValueError(
            f"block geometry gives dimension {geom.k}, codebook has {codebook.k}"
        )
    if codebook.n > MAX_CODEBOOK_SIZE:
        raise ValueError(f"codebook size {codebook.n} exceeds {MAX_CODEBOOK_SIZE}")
    vectors = blockify(img, geom)
    indices, stats, _ = encode_vectors(vectors, codebook, table, cfg)
    h, w = np.asarray(img).shape
    stream = IndexStream(
        n_codevectors=codebook.n,
        block_w=geom.block_w,
        block_h=geom.block_h,
        width=w,
        height=h,
        indices=indices.astype(np.uint16),
    )
    return stream, stats


def decode_image(stream: IndexStream, codebook: Codebook) -> np.ndarray:
    if stream.n_codevectors != codebook.n:
        raise ValueError(
            f"stream was encoded with {stream.n_codevectors} codevectors, "
            f"codebook has {codebook.n}"
        )
    geom = stream.geometry
    if geom.k != codebook.k:
        raise ValueError("stream block geometry does not match codebook dimension")
    idx = np.asarray(stream.indices, dtype=np.int64)
    if idx.size and int(idx.max()) >= codebook.n:
        raise ValueError(f"index {int(idx.max())} out of range for codebook of {codebook.n}")
    vectors = codebook.vectors[idx]
    return deblockify(vectors, geom, stream.width, stream.height)


PURE_QUANTUM_FACTOR = 45.0  # reported operation count of the all-quantum encoder


def report(stats: PartitionStats, n: int) -> str:
    """Machine-readable key=value summary of one encode run."""
    sqrt_n = math.sqrt(n)
    lines = [
        f"n={n}",
        f"sqrt_n={sqrt_n!r}",
        f"vectors={stats.n_vectors}",
        f"mean_grover_iters={stats.mean_grover_iterations!r}",
        f"max_grover_iters={stats.max_grover_iterations}",
        f"mean_classical_evals={stats.mean_classical_evals!r}",
        f"max_classical_evals={stats.max_classical_evals}",
        f"frac_s={stats.a!r}",
        f"frac_t_minus_s={stats.b!r}",
        f"frac_i_minus_t={stats.c!r}",
        f"ratio_vs_sqrt_n={stats.mean_grover_iterations / sqrt_n!r}",
        f"ratio_vs_pure_quantum={stats.mean_grover_iterations / (PURE_QUANTUM_FACTOR * sqrt_n)!r}",
        f"count_sub1={stats.count_sub1}",
        f"count_sub2={stats.count_sub2}",
        f"count_fallback={stats.count_fallback}",
    ]
    return "\n".join(lines) + "\n"


def grid_codebook(n: int, spacing: float = 10.0) -> Codebook:
    """Square-lattice codebook in 2-D; n must be a perfect square.

    Every pairwise distance is at least ``spacing``, so delta0 == spacing and
    all three encoder regions are realizable inside the lattice.
    """
    side = round(math.sqrt(n))
    if side * side != n:
        raise ValueError(f"{n} is not a perfect square")
    coords = np.arange(side, dtype=np.float64) * spacing
    xx, yy = np.meshgrid(coords, coords, indexing="ij")
    return Codebook(np.column_stack([xx.ravel(), yy.ravel()]))


def clustered_dataset(
    codebook: Codebook,
    delta_hat: float,
    n_vectors: int,
    seed: int,
    weights: tuple[float, float, float] = (0.90, 0.09, 0.01),
) -> np.ndarray:
    """Synthetic inputs matching the three-region mixture around a grid codebook.

    Vectors are placed at controlled radii along diagonal directions from a
    random codevector: inside delta0/2, in the shell [delta0/2, delta_hat), or
    past delta_hat from every codevector (cell centers).  The beyond-threshold
    count is kept strictly under 1% of the total.
    """
    if codebook.k != 2:
        raise ValueError("clustered dataset generator expects a 2-D grid codebook")
    half = codebook.delta0 / 2.0
    if not 1.02 * half <= delta_hat <= 0.98 * half * math.sqrt(2.0):
        raise ValueError(
            f"delta_hat must lie in [{1.02 * half}, {0.98 * half * math.sqrt(2.0)}] "
            "for the grid geometry"
        )
    rng = np.random.default_rng(seed)
    n_core = round(weights[0] * n_vectors)
    n_far = max(1, math.ceil(weights[2] * n_vectors) - 1)  # strictly below 1%
    n_shell = n_vectors - n_core - n_far
    diag = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=np.float64) / math.sqrt(2.0)

    rows = []
    centers = codebook.vectors[rng.integers(0, codebook.n, size=n_core)]
    radii = rng.uniform(0.0, 0.98 * half, size=n_core)
    angles = rng.uniform(0.0, 2.0 * math.pi, size=n_core)
    rows.append(centers + radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)]))

    # shell and far points use diagonal offsets so the chosen codevector stays nearest
    centers = codebook.vectors[rng.integers(0, codebook.n, size=n_shell)]
    radii = rng.uniform(1.001 * half, 0.999 * delta_hat, size=n_shell)
    dirs = diag[rng.integers(0, 4, size=n_shell)]
    rows.append(centers + radii[:, None] * dirs)

    centers = codebook.vectors[rng.integers(0, codebook.n, size=n_far)]
    far_radius = half * math.sqrt(2.0)  # cell-center distance from all four corners
    margin = 0.02 * (far_radius - delta_hat)
    radii = rng.uniform(delta_hat + margin, far_radius - margin, size=n_far)
    dirs = diag[rng.integers(0, 4, size=n_far)]
    rows.append(centers + radii[:, None] * dirs)

    data = np.vstack(rows)
    return data[rng.permutation(data.shape[0])]
