import numpy as np
import pytest

from discovid.errors import BackendUnavailable, GenerationFailed, MissingSeed
from discovid.genbackend import (
    BackendDescriptor,
    ImageFrame,
    MockBackend,
    RemoteBackend,
    make_backend,
    mock_image,
)
from discovid.timeline import ImageSpec


def spec(prompt="sunset", seed=1, size=64):
    return ImageSpec(prompt=prompt, seed=seed, width=size, height=size)


# --------------------------------------------------------------------------
# frames
# --------------------------------------------------------------------------

def test_frame_pixel_buffer_must_match_dims():
    with pytest.raises(ValueError):
        ImageFrame(width=4, height=4, pixels=b"\x00" * 10)


def test_frame_png_roundtrip():
    frame = mock_image(spec())
    back = ImageFrame.from_png(frame.to_png())
    assert back == frame


def test_frame_digest_depends_on_pixels_only():
    a = mock_image(spec())
    b = ImageFrame(width=a.width, height=a.height, pixels=a.pixels)
    assert a.digest() == b.digest()
    assert a.digest() != mock_image(spec(seed=2)).digest()


# --------------------------------------------------------------------------
# mock generation
# --------------------------------------------------------------------------

def test_mock_is_bit_identical_across_calls():
    a = mock_image(spec("sunset", 1))
    b = mock_image(spec("sunset", 1))
    assert a.pixels == b.pixels


def test_mock_different_seeds_differ():
    a = mock_image(spec("sunset", 1)).to_array()
    b = mock_image(spec("sunset", 2)).to_array()
    differing = np.mean(np.any(a != b, axis=2))
    assert differing >= 0.01


def test_mock_different_prompts_differ():
    a = mock_image(spec("a", 1)).to_array()
    b = mock_image(spec("b", 1)).to_array()
    assert a.tobytes() != b.tobytes()


def test_mock_pixels_in_range_and_shape():
    frame = mock_image(ImageSpec(prompt="a", seed=3, width=8, height=16))
    arr = frame.to_array()
    assert arr.shape == (16, 8, 3)
    assert arr.dtype == np.uint8


def test_mock_requires_seed():
    with pytest.raises(MissingSeed):
        mock_image(ImageSpec(prompt="a"))


# --------------------------------------------------------------------------
# mock interpolation
# --------------------------------------------------------------------------

def test_interpolate_boundaries_equal_generations():
    backend = MockBackend()
    start, end = spec("a", 1), spec("b", 2)
    assert backend.interpolate(start, end, 0.0).pixels == backend.generate(start).pixels
    assert backend.interpolate(start, end, 1.0).pixels == backend.generate(end).pixels


def test_interpolate_midpoint_is_pixel_average():
    backend = MockBackend()
    start, end = spec("a", 1), spec("b", 2)
    a = backend.generate(start).to_array().astype(np.float64)
    b = backend.generate(end).to_array().astype(np.float64)
    mid = backend.interpolate(start, end, 0.5).to_array()
    expected = np.clip(np.floor((a + b) / 2 + 0.5), 0, 255).astype(np.uint8)
    np.testing.assert_array_equal(mid, expected)
    # the exact example: pixel values 10 and 30 blend to 20
    assert np.floor((1 - 0.5) * 10 + 0.5 * 30 + 0.5) == 20


def test_interpolate_monotone_per_pixel():
    backend = MockBackend()
    start, end = spec("a", 1, size=16), spec("b", 2, size=16)
    a = backend.generate(start).to_array().astype(int)
    b = backend.generate(end).to_array().astype(int)
    stack = np.stack([
        backend.interpolate(start, end, t).to_array().astype(int)
        for t in np.linspace(0, 1, 9)
    ])
    diffs = np.diff(stack, axis=0)
    increasing = a <= b
    assert np.all(diffs[:, increasing] >= 0)
    assert np.all(diffs[:, ~increasing] <= 0)


def test_interpolate_validates_inputs():
    backend = MockBackend()
    with pytest.raises(ValueError):
        backend.interpolate(spec("a", 1), spec("b", 2), 1.5)
    with pytest.raises(MissingSeed):
        backend.interpolate(ImageSpec(prompt="a"), spec("b", 2), 0.5)


# --------------------------------------------------------------------------
# remote backend against the conformance fake server
# --------------------------------------------------------------------------

def test_remote_generate_matches_mock(fake_gen_server):
    remote = RemoteBackend(endpoint=fake_gen_server.url)
    frame = remote.generate(spec("sunset", 5))
    assert frame.pixels == mock_image(spec("sunset", 5)).pixels


def test_remote_boundary_identity(fake_gen_server):
    remote = RemoteBackend(endpoint=fake_gen_server.url)
    start, end = spec("a", 1), spec("b", 2)
    assert remote.interpolate(start, end, 0.0).pixels == remote.generate(start).pixels
    assert remote.interpolate(start, end, 1.0).pixels == remote.generate(end).pixels


def test_remote_surfaces_error_payload(fake_gen_server):
    fake_gen_server.fail_after = 0
    remote = RemoteBackend(endpoint=fake_gen_server.url)
    with pytest.raises(GenerationFailed, match="boom"):
        remote.generate(spec())


def test_remote_unreachable():
    remote = RemoteBackend(endpoint="http://127.0.0.1:1", timeout_sec=0.5)
    with pytest.raises(BackendUnavailable):
        remote.generate(spec())


def test_remote_requires_seed(fake_gen_server):
    remote = RemoteBackend(endpoint=fake_gen_server.url)
    with pytest.raises(MissingSeed):
        remote.generate(ImageSpec(prompt="a"))


# --------------------------------------------------------------------------
# descriptors
# --------------------------------------------------------------------------

def test_descriptor_construction():
    assert isinstance(make_backend(BackendDescriptor(kind="mock")), MockBackend)
    remote = make_backend(BackendDescriptor(kind="remote", endpoint="http://x", timeout_sec=5))
    assert isinstance(remote, RemoteBackend)
    assert remote.timeout_sec == 5
    with pytest.raises(ValueError):
        BackendDescriptor(kind="remote")
    with pytest.raises(ValueError):
        BackendDescriptor(kind="weird")
