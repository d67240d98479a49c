"""Shared fixtures: tiny hand-built annotations and tracking scenarios."""

import pytest

from smotkit.model import (
    BoundingBox,
    InteractionSense,
    InteractionTriplet,
    Trajectory,
    VideoAnnotation,
)


def box(x, y, w=10.0, h=10.0):
    return BoundingBox(float(x), float(y), float(w), float(h))


def straight_trajectory(track_id, x0, y0, vx=0.0, vy=0.0, frames=10, start=0, w=10.0, h=10.0):
    points = tuple(
        (start + k, box(x0 + vx * k, y0 + vy * k, w, h)) for k in range(frames)
    )
    return Trajectory(track_id, points)


def make_annotation(
    trajectories,
    video_id="v1",
    width=640,
    height=480,
    frame_count=100,
    fps=10.0,
    captions=None,
    interactions=(),
    video_caption="two people walk across the room",
):
    if captions is None:
        captions = {t.track_id: f"the person {t.track_id} walks forward" for t in trajectories}
    return VideoAnnotation(
        video_id=video_id,
        width=width,
        height=height,
        frame_count=frame_count,
        fps=fps,
        trajectories=tuple(trajectories),
        instance_captions=dict(captions),
        interactions=tuple(interactions),
        video_caption=video_caption,
    )


@pytest.fixture
def two_track_annotation():
    t1 = straight_trajectory("t1", 0.0, 0.0, vx=2.0, frames=10)
    t2 = straight_trajectory("t2", 200.0, 200.0, vy=1.0, frames=10)
    return make_annotation(
        [t1, t2],
        interactions=(InteractionTriplet("t1", InteractionSense("talk_to", 1), "t2"),),
    )
