"""Figure rendering for the CLI report paths.

Each report command writes its delimited output plus a PNG figure next to
it: the analyze command plots the interval waveform against its cumulative
energy curve, the classify command plots dimension and hold fractions.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .audio import AudioClip, EnergyCurve, waveform_peaks


def save_energy_figure(clip: AudioClip, interval: tuple[float, float],
                       curve: EnergyCurve, path: str | Path, buckets: int = 600) -> Path:
    """Waveform of the interval with the interpolation weights overlaid."""
    begin_sec, end_sec = interval
    i0 = int(begin_sec * clip.sample_rate)
    i1 = int(end_sec * clip.sample_rate)
    segment = AudioClip(samples=clip.samples[i0:i1], sample_rate=clip.sample_rate)
    peaks = waveform_peaks(segment, min(buckets, len(segment.samples)))
    xs = np.linspace(begin_sec, end_sec, len(peaks))

    fig, (ax_wave, ax_curve) = plt.subplots(2, 1, figsize=(9, 5), sharex=True)
    ax_wave.fill_between(xs, [p[0] for p in peaks], [p[1] for p in peaks],
                         color="#4c72b0", linewidth=0)
    ax_wave.set_ylabel("amplitude")
    ax_wave.set_ylim(-1.05, 1.05)

    frame_times = np.linspace(begin_sec, end_sec, len(curve.weights))
    ax_curve.plot(frame_times, curve.weights, color="#dd8452", linewidth=1.5)
    ax_curve.axhline(0.5, color="0.6", linewidth=0.6, linestyle="--")
    ax_curve.set_xlabel("time (s)")
    ax_curve.set_ylabel("blend weight")
    ax_curve.set_ylim(-0.05, 1.05)

    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out


def save_classification_figure(report: dict, path: str | Path) -> Path:
    """Bar chart of per-dimension and hold-rule fractions."""
    labels = ["color", "time", "subject", "style", "hold\n(seed)", "hold\n(keywords)"]
    values = [
        report["color_fraction"], report["time_fraction"],
        report["subject_fraction"], report["style_fraction"],
        report["hold_same_seed_fraction"], report["hold_same_keywords_fraction"],
    ]
    fig, ax = plt.subplots(figsize=(7, 4))
    bars = ax.bar(labels, values, color=["#c44e52"] * 4 + ["#55a868"] * 2)
    for bar, value in zip(bars, values):
        ax.text(bar.get_x() + bar.get_width() / 2, value + 0.01, f"{value:.0%}",
                ha="center", fontsize=9)
    ax.set_ylim(0, 1.1)
    ax.set_ylabel(f"fraction of {report['pairs']} pairs")
    fig.tight_layout()
    out = Path(path)
    fig.savefig(out, dpi=150)
    plt.close(fig)
    return out
