#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "astbench/signal.hpp"

namespace astbench {

/// Physical layout of the sensing strip: one acoustic channel under a
/// silicone cover, with a calibrated section split into press locations.
struct SkinGeometry {
    double channel_diameter = 3.0;   // mm
    double cover_thickness = 1.0;    // mm
    double calibrated_length = 14.0; // mm
    int n_subsections = 7;
    double subsection_gap = 2.0;     // mm

    void validate() const;
};

/// Quadratic indentation-to-force law for the soft skin, with the safe
/// force ceiling the sweep protocol must not exceed.
struct ContactModel {
    double c1 = 1.2;        // N/mm
    double c2 = 0.7;        // N/mm^2
    double max_force = 10.0; // N

    void validate() const;
};

/// Surrogate acoustic channel: per-band exponential attenuation driven by
/// the constricted cross-section, plus multiplicative Gaussian noise.
struct AttenuationModel {
    double alpha0 = 0.8;
    double alpha1 = 1.6;
    double noise_sigma = 0.005; // fraction of the per-band reference magnitude
    std::uint64_t rng_seed = 42;

    void validate() const;
};

/// Snapshot of one press: where, how deep, and what it produced.
struct ContactState {
    int subsection = 0;
    double depth = 0.0;      // mm
    double force = 0.0;      // N
    double area_ratio = 1.0; // in (0, 1]
};

/// Ground-truth contact force at an indentation depth: c1·d + c2·d².
double contact_force(double depth_mm, const ContactModel& cm);

/// Inverse of contact_force: the unique non-negative depth producing the
/// given force.
double contact_depth_for_force(double force_n, const ContactModel& cm);

/// Remaining open fraction of the channel cross-section at a depth,
/// clamped below at 0.05.
double channel_constriction(double depth_mm, const SkinGeometry& geo);

/// Attenuates each reference band by exp(-(alpha0 + alpha1·i/(B-1))·(1-r))
/// and perturbs it with zero-mean Gaussian noise of std noise_sigma times
/// the reference band magnitude, clamped at zero. Pure given the seed.
SpectrumFeatures transmit(const SpectrumFeatures& ref_features, double area_ratio,
                          const AttenuationModel& am, std::uint64_t noise_seed);

/// transmit using am.rng_seed as the noise seed.
SpectrumFeatures transmit(const SpectrumFeatures& ref_features, double area_ratio,
                          const AttenuationModel& am);

/// Full sensing chain with the reference features precomputed once.
/// Per-subsection gains (fixed multiplicative offsets within ±3%) make the
/// press location observable in the spectrum; force does not depend on it.
class SkinSimulator {
public:
    SkinSimulator(SkinGeometry geo, ContactModel contact, AttenuationModel attenuation,
                  SignalConfig cfg);

    /// Senses a press: modulated band features plus the true contact force.
    std::pair<SpectrumFeatures, double> sense(int subsection, double depth_mm,
                                              std::uint64_t noise_seed) const;

    /// sense with the attenuation model's own seed.
    std::pair<SpectrumFeatures, double> sense(int subsection, double depth_mm) const;

    /// The mechanical side of a press, without the acoustic chain.
    ContactState contact_state(int subsection, double depth_mm) const;

    const SkinGeometry& geometry() const { return geo_; }
    const ContactModel& contact() const { return contact_; }
    const AttenuationModel& attenuation() const { return attenuation_; }
    const SignalConfig& signal_config() const { return cfg_; }
    const SpectrumFeatures& reference() const { return reference_; }

    /// The fixed gain vector applied for one subsection.
    const std::vector<double>& subsection_gain(int subsection) const;

private:
    SkinGeometry geo_;
    ContactModel contact_;
    AttenuationModel attenuation_;
    SignalConfig cfg_;
    SpectrumFeatures reference_;
    std::vector<std::vector<double>> gains_; // [subsection][band]
};

} // namespace astbench
