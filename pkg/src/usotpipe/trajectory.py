"""Smooth-path selection over per-frame candidate boxes and pseudo-box interpolation."""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Box, lerp_boxes, reward_dp


@dataclass(frozen=True)
class CandidateFrame:
    """Per-frame mining result: the winning candidate box and its score, if any."""

    frame: int
    box: Box | None = None
    score: float | None = None

    def __post_init__(self) -> None:
        if (self.box is None) != (self.score is None):
            raise ValueError("score must be present exactly when the box is")


@dataclass
class Trajectory:
    """Candidate boxes, the selected subsequence, and the interpolated pseudo boxes."""

    length: int
    boxes: list[Box | None]
    selected: list[bool]
    pseudo: list[Box] | None = None

    def __post_init__(self) -> None:
        if len(self.boxes) != self.length or len(self.selected) != self.length:
            raise ValueError("boxes/selected length mismatch")
        for t, flag in enumerate(self.selected):
            if flag and self.boxes[t] is None:
                raise ValueError(f"frame {t} selected without a candidate box")

    @property
    def num_selected(self) -> int:
        return sum(self.selected)


def dp_select(candidates: list[CandidateFrame], gamma: float, max_gap: int) -> list[int]:
    """Frame indices of the maximum-accumulated-reward path over candidate boxes.

    A link t' -> t is legal when both frames hold candidates and 0 < t - t' <= max_gap;
    its reward is reward_dp of the two boxes. A single-node path scores 0, so the
    result is never empty unless there are no candidates at all. Exact reward ties
    resolve to the lexicographically earliest index sequence.
    """
    if gamma <= 1.0:
        raise ValueError("gamma must exceed 1")
    if max_gap < 1:
        raise ValueError("max_gap must be >= 1")
    nodes = [c for c in candidates if c.box is not None]
    if not nodes:
        return []

    n = len(nodes)
    reward = [0.0] * n        # best accumulated reward of a path ending at node i
    parent: list[int | None] = [None] * n

    def path(i: int) -> list[int]:
        out = []
        cur: int | None = i
        while cur is not None:
            out.append(nodes[cur].frame)
            cur = parent[cur]
        out.reverse()
        return out

    for i in range(n):
        best_r = 0.0
        best_p: int | None = None
        j = i - 1
        while j >= 0 and nodes[i].frame - nodes[j].frame <= max_gap:
            r = reward[j] + reward_dp(nodes[j].box, nodes[i].box, gamma)
            if r > best_r:
                best_r, best_p = r, j
            elif r == best_r:
                # Tie: compare the full candidate paths ending at i.
                challenger = path(j) + [nodes[i].frame]
                incumbent = (path(best_p) + [nodes[i].frame]) if best_p is not None else [nodes[i].frame]
                if challenger < incumbent:
                    best_p = j
            j -= 1
        reward[i] = best_r
        parent[i] = best_p

    winner = 0
    for i in range(1, n):
        if reward[i] > reward[winner]:
            winner = i
        elif reward[i] == reward[winner] and path(i) < path(winner):
            winner = i
    return path(winner)


def interpolate(candidates: list[CandidateFrame], selected) -> list[Box]:
    """Full pseudo-box sequence: selected boxes kept, gaps lerped, ends held.

    Frames strictly between two adjacent selected frames are linearly interpolated
    from those two boxes; frames before the first (after the last) selected frame
    copy the nearest selected box. Candidates must cover frames 0..L-1 in order.
    """
    for t, c in enumerate(candidates):
        if c.frame != t:
            raise ValueError("candidates must cover frames 0..L-1 in order")
    picks = sorted(set(selected))
    if not picks:
        raise ValueError("cannot interpolate with zero selected frames")
    length = len(candidates)
    for t in picks:
        if not 0 <= t < length or candidates[t].box is None:
            raise ValueError(f"selected frame {t} has no candidate box")

    out: list[Box] = []
    nxt = 0  # index into picks of the first selected frame >= t
    for t in range(length):
        while nxt < len(picks) and picks[nxt] < t:
            nxt += 1
        if nxt < len(picks) and picks[nxt] == t:
            out.append(candidates[t].box)
        elif nxt == 0:
            out.append(candidates[picks[0]].box)
        elif nxt == len(picks):
            out.append(candidates[picks[-1]].box)
        else:
            t0, t1 = picks[nxt - 1], picks[nxt]
            out.append(lerp_boxes(candidates[t0].box, candidates[t1].box, t0, t1, t))
    return out


def link_candidates(candidates: list[CandidateFrame], gamma: float, max_gap: int) -> Trajectory:
    """Run dp_select and interpolation; pseudo stays None when nothing was selected."""
    picks = dp_select(candidates, gamma, max_gap)
    length = len(candidates)
    selected = [False] * length
    for t in picks:
        selected[t] = True
    pseudo = interpolate(candidates, picks) if picks else None
    return Trajectory(
        length=length,
        boxes=[c.box for c in candidates],
        selected=selected,
        pseudo=pseudo,
    )
