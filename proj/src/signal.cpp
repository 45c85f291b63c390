#include "astbench/signal.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "astbench/errors.hpp"

namespace astbench {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 Cooley-Tukey, in place, decimation in time.
void fft_inplace(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = x[i + k];
                const std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

} // namespace

SignalConfig::SignalConfig()
    : tone_freqs(default_tone_freqs(44100.0, 4096)) {}

void SignalConfig::validate() const {
    if (!(sample_rate > 0.0))
        throw ConfigError("sample_rate must be positive");
    if (!is_power_of_two(frame_len))
        throw ConfigError("frame_len must be a power of two, got " + std::to_string(frame_len));
    if (tone_freqs.empty())
        throw ConfigError("tone_freqs must not be empty");
    const double nyquist = sample_rate / 2.0;
    double prev = 0.0;
    for (double f : tone_freqs) {
        if (!(f > 0.0) || f >= nyquist)
            throw ConfigError("tone frequency " + std::to_string(f) +
                              " outside (0, sample_rate/2)");
        if (f <= prev)
            throw ConfigError("tone_freqs must be strictly increasing");
        prev = f;
    }
    if (tone_amp < 0.0)
        throw ConfigError("tone_amp must be non-negative");
}

std::vector<double> default_tone_freqs(double sample_rate, std::size_t frame_len,
                                       std::size_t count, double lo_hz, double hi_hz) {
    const double bin = sample_rate / static_cast<double>(frame_len);
    std::vector<double> freqs;
    freqs.reserve(count);
    const double ratio = hi_hz / lo_hz;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = count > 1 ? static_cast<double>(i) / static_cast<double>(count - 1) : 0.0;
        const double f = lo_hz * std::pow(ratio, t);
        // Snap to the nearest bin so the tone is exactly periodic in the frame.
        freqs.push_back(std::round(f / bin) * bin);
    }
    return freqs;
}

TimeSignal synth_reference(const SignalConfig& cfg) {
    cfg.validate();
    TimeSignal sig;
    sig.samples.assign(cfg.frame_len, 0.0);
    for (double f : cfg.tone_freqs) {
        const double w = 2.0 * std::numbers::pi * f / cfg.sample_rate;
        for (std::size_t n = 0; n < cfg.frame_len; ++n)
            sig.samples[n] += cfg.tone_amp * std::sin(w * static_cast<double>(n));
    }
    return sig;
}

std::vector<double> fft_magnitude(const TimeSignal& sig) {
    const std::size_t n = sig.samples.size();
    if (!is_power_of_two(n))
        throw ShapeError("frame length must be a power of two, got " + std::to_string(n));
    std::vector<std::complex<double>> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = {sig.samples[i], 0.0};
    fft_inplace(x);
    std::vector<double> mag(n / 2 + 1);
    for (std::size_t k = 0; k <= n / 2; ++k) mag[k] = std::abs(x[k]);
    return mag;
}

SpectrumFeatures band_features(const std::vector<double>& spectrum, const SignalConfig& cfg) {
    cfg.validate();
    if (spectrum.size() != cfg.frame_len / 2 + 1)
        throw ShapeError("spectrum length " + std::to_string(spectrum.size()) +
                         " does not match frame_len/2+1 = " +
                         std::to_string(cfg.frame_len / 2 + 1));
    SpectrumFeatures out;
    out.bands.reserve(cfg.tone_freqs.size());
    for (double f : cfg.tone_freqs) {
        const auto bin = static_cast<std::size_t>(std::llround(f / cfg.bin_width()));
        out.bands.push_back(spectrum[bin]);
    }
    return out;
}

SpectrumFeatures reference_features(const SignalConfig& cfg) {
    return band_features(fft_magnitude(synth_reference(cfg)), cfg);
}

} // namespace astbench
