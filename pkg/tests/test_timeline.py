import json
import random

import pytest

from discovid.errors import (
    InvalidSpec,
    MalformedProject,
    OutOfRange,
    Overlap,
    SchemaVersionMismatch,
    UnknownInterval,
)
from discovid.timeline import (
    DRAFT,
    GENERATED,
    ImageSpec,
    Interval,
    Project,
    add_interval,
    delete_interval,
    edit_interval,
    interval_frame_count,
    load_project,
    save_project,
    set_endpoint,
)


def make_project(duration=10.0):
    return Project(audio_path="song.wav", duration_sec=duration)


# --------------------------------------------------------------------------
# add / edit / delete
# --------------------------------------------------------------------------

def test_add_first_interval_is_draft():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    assert iv.state == DRAFT
    assert [i.id for i in project.intervals] == [iv.id]


def test_add_touching_boundary_is_legal():
    project = make_project()
    add_interval(project, 0.0, 3.0)
    iv = add_interval(project, 3.0, 5.5)
    assert iv.begin_sec == 3.0
    assert len(project.intervals) == 2


def test_add_overlapping_rejected():
    project = make_project()
    add_interval(project, 0.0, 3.0)
    with pytest.raises(Overlap):
        add_interval(project, 2.5, 4.0)


def test_add_out_of_range():
    project = make_project(duration=5.0)
    with pytest.raises(OutOfRange):
        add_interval(project, 4.0, 6.0)
    with pytest.raises(OutOfRange):
        add_interval(project, -1.0, 2.0)


def test_add_inserts_sorted():
    project = make_project()
    add_interval(project, 5.0, 6.0)
    add_interval(project, 0.0, 1.0)
    add_interval(project, 2.0, 3.0)
    begins = [iv.begin_sec for iv in project.intervals]
    assert begins == sorted(begins)


def test_edit_extends_and_resets_state():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    iv.state = GENERATED
    edited = edit_interval(project, iv.id, 0.0, 4.5)
    assert edited.end_sec == 4.5
    assert edited.state == DRAFT


def test_edit_inverted_bounds():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    with pytest.raises(OutOfRange):
        edit_interval(project, iv.id, 4.0, 2.0)


def test_edit_overlap_with_neighbor():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    add_interval(project, 3.0, 5.0)
    with pytest.raises(Overlap):
        edit_interval(project, iv.id, 0.0, 3.5)


def test_edit_unknown_interval():
    with pytest.raises(UnknownInterval):
        edit_interval(make_project(), "iv-99", 0.0, 1.0)


def test_delete_only_interval():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    delete_interval(project, iv.id)
    assert project.intervals == []


def test_delete_middle_keeps_order():
    project = make_project()
    a = add_interval(project, 0.0, 1.0)
    b = add_interval(project, 2.0, 3.0)
    c = add_interval(project, 4.0, 5.0)
    delete_interval(project, b.id)
    assert [iv.id for iv in project.intervals] == [a.id, c.id]


def test_delete_unknown():
    with pytest.raises(UnknownInterval):
        delete_interval(make_project(), "iv-1")


# --------------------------------------------------------------------------
# endpoints
# --------------------------------------------------------------------------

def test_set_endpoint_stores_spec_verbatim():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    spec = ImageSpec(prompt="Robot DJs, neon dance floor, glitch", seed=7)
    set_endpoint(project, iv.id, "start", spec)
    assert iv.start.prompt == "Robot DJs, neon dance floor, glitch"
    assert iv.start.seed == 7


def test_set_endpoint_resets_generated_state():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    iv.state = GENERATED
    set_endpoint(project, iv.id, "end", ImageSpec(prompt="sunset", seed=1))
    assert iv.state == DRAFT


def test_set_endpoint_rejects_empty_prompt():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    with pytest.raises(InvalidSpec):
        set_endpoint(project, iv.id, "start", ImageSpec(prompt="   "))
    with pytest.raises(InvalidSpec):
        set_endpoint(project, iv.id, "start", ImageSpec(prompt="a,,b"))


def test_spec_dimension_validation():
    with pytest.raises(InvalidSpec):
        ImageSpec(prompt="x", width=100, height=64).validate()
    with pytest.raises(InvalidSpec):
        ImageSpec(prompt="x", width=64, height=4).validate()
    ImageSpec(prompt="x", width=64, height=64).validate()


def test_interval_without_seeds_is_not_renderable():
    project = make_project()
    iv = add_interval(project, 0.0, 3.0)
    set_endpoint(project, iv.id, "start", ImageSpec(prompt="a", seed=1))
    set_endpoint(project, iv.id, "end", ImageSpec(prompt="b"))
    assert not iv.has_concrete_seeds()


# --------------------------------------------------------------------------
# frame counts
# --------------------------------------------------------------------------

@pytest.mark.parametrize("duration,fps,expected", [
    (1.0, 24, 24),
    (0.05, 24, 2),   # floor forced up to the 2-frame minimum
    (2.5, 24, 60),
    (0.5, 24, 12),
    (10.0, 1, 10),
])
def test_interval_frame_count(duration, fps, expected):
    iv = Interval(id="iv-1", begin_sec=0.0, end_sec=duration)
    assert interval_frame_count(iv, fps) == expected


# --------------------------------------------------------------------------
# save / load
# --------------------------------------------------------------------------

def test_save_load_roundtrip():
    project = make_project()
    a = add_interval(project, 0.0, 3.0)
    set_endpoint(project, a.id, "start", ImageSpec(prompt="sunrise, harbor", seed=3))
    set_endpoint(project, a.id, "end", ImageSpec(prompt="sunset, harbor"))
    add_interval(project, 4.0, 6.0)

    loaded = load_project(save_project(project))
    assert loaded.audio_path == project.audio_path
    assert loaded.fps == project.fps
    assert loaded.frame_size == project.frame_size
    assert [(iv.id, iv.begin_sec, iv.end_sec, iv.start, iv.end) for iv in loaded.intervals] == [
        (iv.id, iv.begin_sec, iv.end_sec, iv.start, iv.end) for iv in project.intervals
    ]


def test_load_rejects_overlapping_intervals():
    doc = {
        "version": "1",
        "audio_path": "x.wav",
        "intervals": [
            {"id": "iv-1", "begin_sec": 0.0, "end_sec": 3.0, "start": None, "end": None},
            {"id": "iv-2", "begin_sec": 2.0, "end_sec": 4.0, "start": None, "end": None},
        ],
    }
    with pytest.raises(MalformedProject):
        load_project(json.dumps(doc).encode())


def test_load_applies_default_fps():
    doc = {"version": "1", "audio_path": "x.wav", "intervals": []}
    assert load_project(json.dumps(doc).encode()).fps == 24


def test_load_rejects_unknown_fields():
    doc = {"version": "1", "audio_path": "x.wav", "intervals": [], "surprise": 1}
    with pytest.raises(MalformedProject):
        load_project(json.dumps(doc).encode())
    doc = {"version": "1", "intervals": [
        {"id": "a", "begin_sec": 0, "end_sec": 1, "whatever": True}]}
    with pytest.raises(MalformedProject):
        load_project(json.dumps(doc).encode())


def test_load_rejects_wrong_version():
    with pytest.raises(SchemaVersionMismatch):
        load_project(json.dumps({"version": "2", "intervals": []}).encode())
    with pytest.raises(MalformedProject):
        load_project(json.dumps({"intervals": []}).encode())


def test_load_rejects_duplicate_ids():
    doc = {"version": "1", "intervals": [
        {"id": "iv-1", "begin_sec": 0, "end_sec": 1},
        {"id": "iv-1", "begin_sec": 2, "end_sec": 3},
    ]}
    with pytest.raises(MalformedProject):
        load_project(json.dumps(doc).encode())


def test_load_rejects_bad_json():
    with pytest.raises(MalformedProject):
        load_project(b"{nope")


def test_new_ids_stay_unique_after_load():
    project = make_project()
    add_interval(project, 0.0, 1.0)
    add_interval(project, 2.0, 3.0)
    loaded = load_project(save_project(project))
    loaded.duration_sec = 10.0
    fresh = add_interval(loaded, 4.0, 5.0)
    assert len({iv.id for iv in loaded.intervals}) == 3
    assert fresh.id not in {"iv-1", "iv-2"}


# --------------------------------------------------------------------------
# randomized operation sequences keep the invariants
# --------------------------------------------------------------------------

def check_invariants(project):
    begins = [iv.begin_sec for iv in project.intervals]
    assert begins == sorted(begins)
    for a, b in zip(project.intervals, project.intervals[1:]):
        assert a.end_sec <= b.begin_sec
    for iv in project.intervals:
        assert 0 <= iv.begin_sec < iv.end_sec <= project.duration_sec


def test_random_operation_sequences_never_break_invariants():
    rnd = random.Random(42)
    project = make_project(duration=30.0)
    for _ in range(2000):
        op = rnd.choice(["add", "edit", "delete"])
        begin = round(rnd.uniform(0, 29), 3)
        end = round(begin + rnd.uniform(0.01, 4), 3)
        try:
            if op == "add" or not project.intervals:
                add_interval(project, begin, end)
            elif op == "edit":
                target = rnd.choice(project.intervals)
                edit_interval(project, target.id, begin, end)
            else:
                delete_interval(project, rnd.choice(project.intervals).id)
        except (Overlap, OutOfRange):
            pass
        check_invariants(project)
