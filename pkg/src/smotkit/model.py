"""Domain types and structural validation for SMOT annotations.

A video annotation bundles the "where" (per-track bounding-box
trajectories) with three semantic layers: one natural-language caption per
track, directed track-to-track interaction triplets drawn from a verb-sense
vocabulary, and one overall video caption. Predictions reuse the same
container with the semantic layers optional.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned box as top-left corner plus size, in pixels."""

    x: float
    y: float
    w: float
    h: float

    @property
    def x2(self) -> float:
        return self.x + self.w

    @property
    def y2(self) -> float:
        return self.y + self.h

    @property
    def area(self) -> float:
        return self.w * self.h

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection over union of two valid boxes; 0.0 when disjoint.

    All areas are computed from corner differences so that iou(a, a) is
    exactly 1.0 even when x + w rounds.
    """
    iw = min(a.x2, b.x2) - max(a.x, b.x)
    ih = min(a.y2, b.y2) - max(a.y, b.y)
    inter = iw * ih if (iw > 0.0 and ih > 0.0) else 0.0
    area_a = (a.x2 - a.x) * (a.y2 - a.y)
    area_b = (b.x2 - b.x) * (b.y2 - b.y)
    union = area_a + area_b - inter
    return inter / union if union > 0.0 else 0.0


@dataclass(frozen=True)
class Detection:
    """One detector proposal: a scored box on a 0-based frame."""

    frame_index: int
    box: BoundingBox
    score: float


@dataclass(frozen=True)
class Trajectory:
    """A track id with its (frame, box) points, strictly increasing in frame.

    Gaps between frames are allowed (occlusion); at least one point is
    required for a well-formed trajectory.
    """

    track_id: str
    points: tuple[tuple[int, BoundingBox], ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def first_frame(self) -> int:
        return self.points[0][0]

    @property
    def last_frame(self) -> int:
        return self.points[-1][0]

    def frames(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.points)

    def box_at(self, frame_index: int) -> Optional[BoundingBox]:
        for f, box in self.points:
            if f == frame_index:
                return box
        return None


@dataclass(frozen=True)
class InteractionSense:
    """A verb lemma plus sense index, e.g. hold/1 rendered "hold(v.01)"."""

    lemma: str
    sense: int

    @property
    def label(self) -> str:
        return f"{self.lemma}(v.{self.sense:02d})"


@dataclass(frozen=True)
class InteractionTriplet:
    """Directed <subject, predicate, object> relation between two tracks.

    (a, p, b) and (b, p, a) are distinct relations.
    """

    subject_track: str
    predicate: InteractionSense
    object_track: str

    def key(self) -> tuple[str, str, int, str]:
        return (self.subject_track, self.predicate.lemma, self.predicate.sense, self.object_track)


@dataclass(frozen=True)
class VideoAnnotation:
    """One video's complete ground truth or prediction."""

    video_id: str
    width: int
    height: int
    frame_count: int
    trajectories: tuple[Trajectory, ...]
    instance_captions: Mapping[str, str]
    interactions: tuple[InteractionTriplet, ...]
    video_caption: str
    fps: Optional[float] = None

    def track_ids(self) -> tuple[str, ...]:
        return tuple(t.track_id for t in self.trajectories)

    def trajectory(self, track_id: str) -> Trajectory:
        for t in self.trajectories:
            if t.track_id == track_id:
                return t
        raise KeyError(track_id)

    def total_boxes(self) -> int:
        return sum(len(t) for t in self.trajectories)


@dataclass(frozen=True)
class Finding:
    """One validation finding at a structural location."""

    severity: str  # "error" | "warning"
    code: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = ()

    @property
    def errors(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "error")

    @property
    def warnings(self) -> tuple[Finding, ...]:
        return tuple(f for f in self.findings if f.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors


# Tolerance for frame-bound checks: annotation files round coordinates to
# 1e-6 px, so sums like x + w may exceed the stored width by float dust.
_BOUNDS_EPS = 1e-6


def validate_annotation(
    ann: VideoAnnotation,
    vocabulary: Optional[Iterable[InteractionSense]] = None,
    role: str = "ground_truth",
) -> ValidationReport:
    """Check every structural invariant; findings are reported, never raised.

    ``role`` is "ground_truth" or "prediction". Predictions may omit
    instance captions and may legitimately contain zero tracks; ground
    truth must caption every track. When ``vocabulary`` is given,
    interaction predicates must be members of it.
    """
    if role not in ("ground_truth", "prediction"):
        raise ValueError(f"unknown role: {role!r}")
    found: list[Finding] = []

    def err(code: str, location: str, message: str) -> None:
        found.append(Finding("error", code, location, message))

    def warn(code: str, location: str, message: str) -> None:
        found.append(Finding("warning", code, location, message))

    if ann.width <= 0 or ann.height <= 0:
        err("BAD_DIMENSIONS", "width", f"video dimensions must be positive, got {ann.width}x{ann.height}")
    if ann.frame_count <= 0:
        err("BAD_DIMENSIONS", "frame_count", f"frame_count must be positive, got {ann.frame_count}")
    if ann.fps is not None and ann.fps <= 0:
        err("BAD_FPS", "fps", f"fps must be positive when present, got {ann.fps}")

    seen_ids: set[str] = set()
    for traj in ann.trajectories:
        loc = f"trajectories[{traj.track_id}]"
        if traj.track_id in seen_ids:
            err("DUPLICATE_TRACK_ID", loc, f"track id {traj.track_id!r} appears more than once")
        seen_ids.add(traj.track_id)
        if not traj.points:
            err("EMPTY_TRAJECTORY", loc, "trajectory has no points")
            continue
        prev_frame = None
        for k, (frame, box) in enumerate(traj.points):
            ploc = f"{loc}.points[{k}]"
            if prev_frame is not None and frame <= prev_frame:
                err("POINT_ORDER", ploc, f"frame {frame} does not increase past {prev_frame}")
            prev_frame = frame
            if frame < 0 or frame >= ann.frame_count:
                err("FRAME_RANGE", ploc, f"frame {frame} outside [0, {ann.frame_count})")
            if box.w <= 0 or box.h <= 0:
                err("NONPOSITIVE_SIZE", ploc, f"box size {box.w}x{box.h} must be positive")
            elif (
                box.x < -_BOUNDS_EPS
                or box.y < -_BOUNDS_EPS
                or box.x2 > ann.width + _BOUNDS_EPS
                or box.y2 > ann.height + _BOUNDS_EPS
            ):
                err(
                    "BOX_OUT_OF_BOUNDS",
                    ploc,
                    f"box ({box.x}, {box.y}, {box.w}, {box.h}) exceeds {ann.width}x{ann.height} frame",
                )

    if role == "ground_truth" and not ann.trajectories:
        warn("NO_TRACKS", "trajectories", "ground truth contains no tracks")

    for track_id, caption in sorted(ann.instance_captions.items()):
        loc = f"instance_captions[{track_id}]"
        if track_id not in seen_ids:
            err("UNKNOWN_TRACK", loc, f"caption references unknown track {track_id!r}")
        if not caption.strip():
            warn("EMPTY_CAPTION", loc, "caption text is empty")
    if role == "ground_truth":
        for track_id in sorted(seen_ids - set(ann.instance_captions)):
            err("MISSING_CAPTION", f"instance_captions[{track_id}]", f"track {track_id!r} has no instance caption")

    vocab_keys = None
    if vocabulary is not None:
        vocab_keys = {(s.lemma, s.sense) for s in vocabulary}
    seen_triplets: set[tuple] = set()
    for k, triplet in enumerate(ann.interactions):
        loc = f"interactions[{k}]"
        if triplet.subject_track == triplet.object_track:
            err("SELF_INTERACTION", loc, f"subject and object are both {triplet.subject_track!r}")
        for endpoint in (triplet.subject_track, triplet.object_track):
            if endpoint not in seen_ids:
                err("UNKNOWN_TRACK", loc, f"interaction references unknown track {endpoint!r}")
        if vocab_keys is not None and (triplet.predicate.lemma, triplet.predicate.sense) not in vocab_keys:
            err("UNKNOWN_SENSE", loc, f"predicate {triplet.predicate.label} is not in the vocabulary")
        if triplet.key() in seen_triplets:
            warn("DUPLICATE_INTERACTION", loc, f"exact duplicate of {triplet.predicate.label} triplet")
        seen_triplets.add(triplet.key())

    if role == "ground_truth" and not ann.video_caption.strip():
        warn("EMPTY_CAPTION", "video_caption", "video caption is empty")

    found.sort(key=lambda f: (f.location, f.code, f.message))
    return ValidationReport(tuple(found))
