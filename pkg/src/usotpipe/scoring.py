"""Video/frame quality scores and smooth-fragment bounds around an anchor frame."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import reward_dp
from .trajectory import Trajectory


@dataclass(frozen=True)
class Fragment:
    """Inclusive frame-index range [lower, upper] around an anchor."""

    lower: int
    upper: int

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError("fragment lower bound exceeds upper bound")

    def __len__(self) -> int:
        return self.upper - self.lower + 1

    def __contains__(self, t: int) -> bool:
        return self.lower <= t <= self.upper


def video_quality(traj: Trajectory) -> float:
    """Fraction of frames selected by the path search; exact rational count/length."""
    if traj.length < 1:
        raise ValueError("empty trajectory")
    return traj.num_selected / traj.length


def frame_quality(traj: Trajectory, t: int, t_s: int) -> float:
    """Selected-frame density in the window [t-t_s, t+t_s].

    The window is clipped to the video but the denominator stays 2*t_s + 1, so
    border frames score lower than equally supported interior frames.
    """
    if not 0 <= t < traj.length:
        raise ValueError(f"frame {t} outside [0, {traj.length})")
    if t_s < 1:
        raise ValueError("t_s must be >= 1")
    lo = max(0, t - t_s)
    hi = min(traj.length - 1, t + t_s)
    hits = sum(traj.selected[lo:hi + 1])
    return hits / (2 * t_s + 1)


def fragment_bounds(traj: Trajectory, t: int, gamma: float,
                    theta2: float, theta3: float, t_s: int) -> Fragment:
    """Maximal run around frame t where consecutive pseudo boxes stay smooth.

    Extending from the anchor, every added frame t' must satisfy both
    reward_dp(pseudo[t'-1], pseudo[t']) >= theta2 on its link and
    frame_quality(t') >= theta3; the anchor itself is exempt from the
    quality test. The scan is symmetric toward lower indices.
    """
    if traj.pseudo is None:
        raise ValueError("fragment bounds need the interpolated pseudo sequence")
    if not 0 <= t < traj.length:
        raise ValueError(f"frame {t} outside [0, {traj.length})")
    pseudo = traj.pseudo

    upper = t
    while upper + 1 < traj.length:
        if reward_dp(pseudo[upper], pseudo[upper + 1], gamma) < theta2:
            break
        if frame_quality(traj, upper + 1, t_s) < theta3:
            break
        upper += 1

    lower = t
    while lower - 1 >= 0:
        if reward_dp(pseudo[lower - 1], pseudo[lower], gamma) < theta2:
            break
        if frame_quality(traj, lower - 1, t_s) < theta3:
            break
        lower -= 1

    return Fragment(lower, upper)
