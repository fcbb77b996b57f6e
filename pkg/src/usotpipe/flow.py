"""Dense optical-flow fields: file IO, motion distance map, binarization, block matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

FLO_MAGIC = np.float32(202021.25)  # little-endian bytes spell "PIEH"

# Guard against absurd headers before allocating the payload.
_MAX_DIM = 1 << 20
_MAX_PIXELS = 1 << 28


class FlowFormatError(ValueError):
    """Raised for malformed flow files."""


@dataclass(frozen=True)
class FlowField:
    """Per-pixel (u, v) displacement for one frame pair, shape (H, W, 2) float32."""

    data: np.ndarray

    def __post_init__(self) -> None:
        d = np.ascontiguousarray(self.data, dtype=np.float32)
        if d.ndim != 3 or d.shape[2] != 2 or d.shape[0] < 1 or d.shape[1] < 1:
            raise ValueError(f"flow field must be (H, W, 2), got {self.data.shape}")
        if not np.isfinite(d).all():
            raise ValueError("flow field contains non-finite values")
        object.__setattr__(self, "data", d)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ScalarField:
    """Per-pixel non-negative scalar, shape (H, W) float64."""

    data: np.ndarray

    def __post_init__(self) -> None:
        d = np.ascontiguousarray(self.data, dtype=np.float64)
        if d.ndim != 2:
            raise ValueError(f"scalar field must be 2-D, got {self.data.shape}")
        object.__setattr__(self, "data", d)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class BinaryMask:
    """Per-pixel boolean mask, shape (H, W)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        d = np.ascontiguousarray(self.data, dtype=bool)
        if d.ndim != 2:
            raise ValueError(f"mask must be 2-D, got {self.data.shape}")
        object.__setattr__(self, "data", d)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def density(self) -> float:
        return float(self.data.mean())


def load_flow(path) -> FlowField:
    """Read a .flo file (magic float, int32 w/h, interleaved float32 u,v pairs)."""
    raw = Path(path).read_bytes()
    if len(raw) < 12:
        raise FlowFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic = np.frombuffer(raw, dtype="<f4", count=1)[0]
    if magic != FLO_MAGIC:
        raise FlowFormatError(f"{path}: bad magic {magic!r}")
    w, h = (int(x) for x in np.frombuffer(raw, dtype="<i4", count=2, offset=4))
    if not (0 < w <= _MAX_DIM and 0 < h <= _MAX_DIM) or w * h > _MAX_PIXELS:
        raise FlowFormatError(f"{path}: implausible dimensions {w}x{h}")
    expected = 12 + 8 * w * h
    if len(raw) != expected:
        raise FlowFormatError(f"{path}: payload is {len(raw)} bytes, expected {expected}")
    data = np.frombuffer(raw, dtype="<f4", offset=12).reshape(h, w, 2)
    if not np.isfinite(data).all():
        raise FlowFormatError(f"{path}: non-finite flow values")
    return FlowField(data)


def write_flow(path, flow: FlowField) -> None:
    """Write a .flo file, bit-exact round trip with load_flow."""
    h, w = flow.height, flow.width
    header = FLO_MAGIC.tobytes() + np.array([w, h], dtype="<i4").tobytes()
    payload = np.ascontiguousarray(flow.data, dtype="<f4").tobytes()
    Path(path).write_bytes(header + payload)


def distance_map(flow: FlowField) -> ScalarField:
    """Per-pixel Euclidean deviation of the flow vector from the spatial mean flow."""
    d = flow.data.astype(np.float64)
    mean = d.reshape(-1, 2).mean(axis=0)
    return ScalarField(np.hypot(d[:, :, 0] - mean[0], d[:, :, 1] - mean[1]))


def binarize(dist: ScalarField, alpha: float) -> BinaryMask:
    """Threshold at alpha*max + (1-alpha)*mean; pixels at or above it are true."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    d = dist.data
    threshold = alpha * d.max() + (1.0 - alpha) * d.mean()
    return BinaryMask(d >= threshold)


@dataclass(frozen=True)
class FlowEstimatorParams:
    """Coarse-to-fine block matcher knobs.

    Upper bounds keep the packed int64 match key (SAD, displacement, tie-break)
    collision-free: SAD < 2^24 and total displacement < 512.
    """

    block_size: int = 8
    search_radius: int = 4
    levels: int = 3

    def __post_init__(self) -> None:
        if not 1 <= self.block_size <= 16:
            raise ValueError("block_size must lie in [1, 16]")
        if not 1 <= self.search_radius <= 15:
            raise ValueError("search_radius must lie in [1, 15]")
        if not 1 <= self.levels <= 5:
            raise ValueError("levels must lie in [1, 5]")


def estimate_flow(frame_a: np.ndarray, frame_b: np.ndarray,
                  params: FlowEstimatorParams | None = None) -> FlowField:
    """Dense displacement from frame_a to frame_b via coarse-to-fine block matching.

    Sum-of-absolute-difference cost over block_size^2 blocks, searched within
    +-search_radius at each pyramid level, ties broken toward zero displacement.
    Output is block-constant and integer-valued.
    """
    if params is None:
        params = FlowEstimatorParams()
    a = np.asarray(frame_a)
    b = np.asarray(frame_b)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("estimate_flow expects 2-D grayscale images")
    if a.shape != b.shape:
        raise ValueError(f"frame shapes differ: {a.shape} vs {b.shape}")

    pyr_a = _pyramid(a.astype(np.int32), params.levels)
    pyr_b = _pyramid(b.astype(np.int32), params.levels)

    u = np.zeros(pyr_a[-1].shape, dtype=np.int32)
    v = np.zeros(pyr_a[-1].shape, dtype=np.int32)
    for level in range(params.levels - 1, -1, -1):
        u, v = _match_level(pyr_a[level], pyr_b[level], u, v,
                            params.block_size, params.search_radius)
        if level > 0:
            nh, nw = pyr_a[level - 1].shape
            u = (np.repeat(np.repeat(u, 2, axis=0), 2, axis=1) * 2)[:nh, :nw]
            v = (np.repeat(np.repeat(v, 2, axis=0), 2, axis=1) * 2)[:nh, :nw]

    return FlowField(np.stack([u, v], axis=-1).astype(np.float32))


def _pyramid(img: np.ndarray, levels: int) -> list[np.ndarray]:
    out = [img]
    for _ in range(levels - 1):
        cur = out[-1]
        h, w = cur.shape
        padded = np.pad(cur, ((0, h % 2), (0, w % 2)), mode="edge")
        ph, pw = padded.shape
        out.append(padded.reshape(ph // 2, 2, pw // 2, 2).sum(axis=(1, 3)))
    return out


def _match_level(a: np.ndarray, b: np.ndarray, init_u: np.ndarray, init_v: np.ndarray,
                 block: int, radius: int) -> tuple[np.ndarray, np.ndarray]:
    h, w = a.shape
    yy, xx = np.indices((h, w))
    warped = b[np.clip(yy + init_v, 0, h - 1), np.clip(xx + init_u, 0, w - 1)]

    pad_h = (-h) % block
    pad_w = (-w) % block
    a_p = np.pad(a, ((0, pad_h), (0, pad_w)), mode="edge")
    w_p = np.pad(warped, ((0, pad_h), (0, pad_w)), mode="edge")
    u_p = np.pad(init_u, ((0, pad_h), (0, pad_w)), mode="edge")
    v_p = np.pad(init_v, ((0, pad_h), (0, pad_w)), mode="edge")
    ph, pw = a_p.shape
    nby, nbx = ph // block, pw // block

    # init is block-constant (zeros at the coarsest level, 2x-repeated after), so
    # the top-left sample represents the whole block.
    base_u = u_p[::block, ::block].astype(np.int64)
    base_v = v_p[::block, ::block].astype(np.int64)

    shifted = np.pad(w_p, radius, mode="edge")
    offsets = [(dv, du) for dv in range(-radius, radius + 1)
               for du in range(-radius, radius + 1)]
    keys = np.empty((len(offsets), nby, nbx), dtype=np.int64)
    for k, (dv, du) in enumerate(offsets):
        window = shifted[radius + dv:radius + dv + ph, radius + du:radius + du + pw]
        sad = np.abs(a_p - window).reshape(nby, block, nbx, block).sum(
            axis=(1, 3), dtype=np.int64)
        tu = base_u + du
        tv = base_v + dv
        # Composite key realizes the tie-break: SAD first, then displacement
        # magnitude toward zero, then (v, u) for a total deterministic order.
        keys[k] = (((sad << 19) + tu * tu + tv * tv) << 20) + ((tv + 512) << 10) + (tu + 512)
    best = np.argmin(keys, axis=0)
    du_arr = np.array([du for _, du in offsets], dtype=np.int32)
    dv_arr = np.array([dv for dv, _ in offsets], dtype=np.int32)
    bu = (base_u + du_arr[best]).astype(np.int32)
    bv = (base_v + dv_arr[best]).astype(np.int32)

    out_u = np.repeat(np.repeat(bu, block, axis=0), block, axis=1)[:h, :w]
    out_v = np.repeat(np.repeat(bv, block, axis=0), block, axis=1)[:h, :w]
    return out_u, out_v
