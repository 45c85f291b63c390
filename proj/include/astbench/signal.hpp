#pragma once

#include <cstddef>
#include <vector>

namespace astbench {

/// Parameters of the reference excitation: a comb of equal-amplitude
/// sinusoids whose frequencies sit exactly on FFT bins, so each tone maps
/// to a single leakage-free spectrum line.
struct SignalConfig {
    double sample_rate = 44100.0;          // Hz
    std::size_t frame_len = 4096;          // samples, power of two
    std::vector<double> tone_freqs;        // Hz, strictly increasing, < Nyquist
    double tone_amp = 1.0;

    SignalConfig();

    double bin_width() const { return sample_rate / static_cast<double>(frame_len); }
    std::size_t num_bands() const { return tone_freqs.size(); }

    /// Throws ConfigError when any invariant is violated.
    void validate() const;
};

/// Sixteen log-spaced tones over [lo_hz, hi_hz], each rounded to the
/// nearest FFT bin frequency.
std::vector<double> default_tone_freqs(double sample_rate, std::size_t frame_len,
                                       std::size_t count = 16, double lo_hz = 200.0,
                                       double hi_hz = 15000.0);

/// One frame of time-domain samples.
struct TimeSignal {
    std::vector<double> samples;
};

/// Per-tone magnitude feature vector; the regression input.
struct SpectrumFeatures {
    std::vector<double> bands;

    std::size_t size() const { return bands.size(); }
    double& operator[](std::size_t i) { return bands[i]; }
    double operator[](std::size_t i) const { return bands[i]; }
};

/// Synthesises one frame of the reference tone comb.
TimeSignal synth_reference(const SignalConfig& cfg);

/// One-sided magnitude spectrum (frame_len/2 + 1 lines, unnormalised DFT
/// magnitudes). The frame length must be a power of two.
std::vector<double> fft_magnitude(const TimeSignal& sig);

/// Reduces a full spectrum to per-tone band magnitudes: bands[i] is the
/// magnitude at the bin nearest cfg.tone_freqs[i].
SpectrumFeatures band_features(const std::vector<double>& spectrum, const SignalConfig& cfg);

/// The full reference chain band_features(fft(synth_reference(cfg))).
SpectrumFeatures reference_features(const SignalConfig& cfg);

} // namespace astbench
