#include "astbench/skin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "astbench/errors.hpp"
#include "astbench/rng.hpp"

namespace astbench {

namespace {

constexpr double kMinAreaRatio = 0.05;
constexpr double kSubsectionGainSpan = 0.03; // ±3 %

} // namespace

void SkinGeometry::validate() const {
    if (!(channel_diameter > 0.0) || !(cover_thickness > 0.0) ||
        !(calibrated_length > 0.0) || !(subsection_gap > 0.0))
        throw ConfigError("skin dimensions must be positive");
    if (n_subsections <= 0)
        throw ConfigError("n_subsections must be positive");
    const double expected = static_cast<double>(n_subsections) * subsection_gap;
    if (std::abs(expected - calibrated_length) > 1e-9)
        throw ConfigError("n_subsections * subsection_gap must equal calibrated_length");
}

void ContactModel::validate() const {
    if (!(c1 > 0.0)) throw ConfigError("contact c1 must be positive");
    if (c2 < 0.0) throw ConfigError("contact c2 must be non-negative");
    if (!(max_force > 0.0)) throw ConfigError("max_force must be positive");
}

void AttenuationModel::validate() const {
    if (alpha0 < 0.0 || alpha1 < 0.0)
        throw ConfigError("attenuation coefficients must be non-negative");
    if (noise_sigma < 0.0 || noise_sigma >= 1.0)
        throw ConfigError("noise_sigma must be in [0, 1)");
}

double contact_force(double depth_mm, const ContactModel& cm) {
    if (depth_mm < 0.0)
        throw DomainError("indentation depth must be non-negative, got " +
                          std::to_string(depth_mm));
    return cm.c1 * depth_mm + cm.c2 * depth_mm * depth_mm;
}

double contact_depth_for_force(double force_n, const ContactModel& cm) {
    if (force_n < 0.0)
        throw DomainError("contact force must be non-negative, got " +
                          std::to_string(force_n));
    if (force_n == 0.0) return 0.0;
    if (cm.c2 == 0.0) return force_n / cm.c1;
    // Positive root of c2·d² + c1·d − f = 0.
    const double disc = cm.c1 * cm.c1 + 4.0 * cm.c2 * force_n;
    return (-cm.c1 + std::sqrt(disc)) / (2.0 * cm.c2);
}

double channel_constriction(double depth_mm, const SkinGeometry& geo) {
    if (depth_mm < 0.0)
        throw DomainError("indentation depth must be non-negative, got " +
                          std::to_string(depth_mm));
    const double reach = geo.cover_thickness + geo.channel_diameter;
    return std::max(kMinAreaRatio, 1.0 - depth_mm / reach);
}

SpectrumFeatures transmit(const SpectrumFeatures& ref_features, double area_ratio,
                          const AttenuationModel& am, std::uint64_t noise_seed) {
    if (!(area_ratio > 0.0) || area_ratio > 1.0)
        throw DomainError("area_ratio must be in (0, 1], got " + std::to_string(area_ratio));
    const std::size_t bands = ref_features.size();
    SpectrumFeatures out;
    out.bands.resize(bands);
    Rng rng(noise_seed);
    const double squeeze = 1.0 - area_ratio;
    for (std::size_t i = 0; i < bands; ++i) {
        const double slope =
            bands > 1 ? static_cast<double>(i) / static_cast<double>(bands - 1) : 0.0;
        const double alpha = am.alpha0 + am.alpha1 * slope;
        double v = ref_features[i] * std::exp(-alpha * squeeze);
        if (am.noise_sigma > 0.0)
            v += rng.gaussian() * am.noise_sigma * ref_features[i];
        out.bands[i] = std::max(0.0, v);
    }
    return out;
}

SpectrumFeatures transmit(const SpectrumFeatures& ref_features, double area_ratio,
                          const AttenuationModel& am) {
    return transmit(ref_features, area_ratio, am, am.rng_seed);
}

SkinSimulator::SkinSimulator(SkinGeometry geo, ContactModel contact,
                             AttenuationModel attenuation, SignalConfig cfg)
    : geo_(std::move(geo)),
      contact_(std::move(contact)),
      attenuation_(std::move(attenuation)),
      cfg_(std::move(cfg)) {
    geo_.validate();
    contact_.validate();
    attenuation_.validate();
    cfg_.validate();
    reference_ = reference_features(cfg_);
    // Fixed gain offsets keyed only by subsection and band index; not a
    // noise source, just a location signature.
    gains_.resize(static_cast<std::size_t>(geo_.n_subsections));
    for (int s = 0; s < geo_.n_subsections; ++s) {
        auto& g = gains_[static_cast<std::size_t>(s)];
        g.resize(reference_.size());
        Rng rng(derive_seed(0x5EC7104ULL, static_cast<std::uint64_t>(s)));
        for (double& v : g)
            v = 1.0 + kSubsectionGainSpan * (2.0 * rng.uniform() - 1.0);
    }
}

const std::vector<double>& SkinSimulator::subsection_gain(int subsection) const {
    if (subsection < 0 || subsection >= geo_.n_subsections)
        throw IndexError("subsection " + std::to_string(subsection) + " out of range 0.." +
                         std::to_string(geo_.n_subsections - 1));
    return gains_[static_cast<std::size_t>(subsection)];
}

std::pair<SpectrumFeatures, double> SkinSimulator::sense(int subsection, double depth_mm,
                                                         std::uint64_t noise_seed) const {
    const auto& gain = subsection_gain(subsection);
    const double ratio = channel_constriction(depth_mm, geo_);
    SpectrumFeatures features = transmit(reference_, ratio, attenuation_, noise_seed);
    for (std::size_t i = 0; i < features.size(); ++i) features[i] *= gain[i];
    return {std::move(features), contact_force(depth_mm, contact_)};
}

std::pair<SpectrumFeatures, double> SkinSimulator::sense(int subsection,
                                                         double depth_mm) const {
    return sense(subsection, depth_mm, attenuation_.rng_seed);
}

ContactState SkinSimulator::contact_state(int subsection, double depth_mm) const {
    subsection_gain(subsection); // range check
    return {subsection, depth_mm, contact_force(depth_mm, contact_),
            channel_constriction(depth_mm, geo_)};
}

} // namespace astbench
