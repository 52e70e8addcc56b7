"""Audio-reactive interval-based text-to-video composition engine."""

from .audio import (
    AudioClip,
    EnergyCurve,
    HpssMasks,
    Spectrogram,
    compute_energy_curve,
    decode_wav,
    encode_wav,
    hpss,
    percussive_signal,
    stft,
    waveform_peaks,
)
from .analysis import (
    DimensionLexicons,
    IntervalClassification,
    classify,
    corpus_report,
    default_lexicons,
)
from .genbackend import (
    BackendDescriptor,
    ImageFrame,
    MockBackend,
    RemoteBackend,
    make_backend,
    mock_image,
)
from .prompting import (
    BrainstormResult,
    Prompt,
    SeedSource,
    StyleLexicon,
    brainstorm,
    brainstorm_subjects,
    default_style_lexicon,
    resolve_seeds,
    sample_styles,
    shuffle_variations,
)
from .renderer import (
    FrameSchedule,
    RenderedInterval,
    VideoOutput,
    encode_video,
    export_frames,
    render_interval,
    schedule,
    stitch,
)
from .timeline import (
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

__version__ = "0.1.0"
