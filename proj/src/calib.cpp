#include "astbench/calib.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "astbench/errors.hpp"
#include "astbench/rng.hpp"

namespace astbench {

std::size_t CalibrationDataset::feature_dim() const {
    return samples.empty() ? 0 : samples.front().features.size();
}

void CalibrationDataset::validate() const {
    if (samples.empty()) throw DatasetError("dataset is empty");
    const std::size_t dim = samples.front().features.size();
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].features.size() != dim)
            throw DatasetError("sample " + std::to_string(i) + " has feature length " +
                               std::to_string(samples[i].features.size()) + ", expected " +
                               std::to_string(dim));
        if (samples[i].force_n < 0.0)
            throw DatasetError("sample " + std::to_string(i) + " has negative force");
    }
}

void SweepProtocol::validate() const {
    if (!(depth_step > 0.0)) throw ConfigError("depth_step must be positive");
    if (!(force_stop > 0.0)) throw ConfigError("force_stop must be positive");
    if (repeats < 1) throw ConfigError("repeats must be at least 1");
}

std::vector<double> sweep_depth_levels(const SweepProtocol& protocol, const ContactModel& cm) {
    protocol.validate();
    std::vector<double> levels;
    double depth = 0.0;
    for (int step = 0; step <= 100; ++step) {
        levels.push_back(depth);
        if (contact_force(depth, cm) >= protocol.force_stop) return levels;
        depth += protocol.depth_step;
    }
    throw ProtocolError("contact force never reached " + std::to_string(protocol.force_stop) +
                        " N within 100 depth steps");
}

CalibrationDataset generate_dataset(const SweepProtocol& protocol, const SkinSimulator& sim,
                                    std::uint64_t seed) {
    protocol.validate();
    const std::vector<double> levels = sweep_depth_levels(protocol, sim.contact());
    CalibrationDataset ds;
    ds.provenance = {protocol.depth_step, protocol.force_stop, protocol.repeats, seed};
    const int subsections = sim.geometry().n_subsections;
    ds.samples.reserve(static_cast<std::size_t>(subsections) * levels.size() *
                       static_cast<std::size_t>(protocol.repeats));
    for (int s = 0; s < subsections; ++s) {
        for (std::size_t level = 0; level < levels.size(); ++level) {
            for (int rep = 0; rep < protocol.repeats; ++rep) {
                const std::uint64_t stream = (static_cast<std::uint64_t>(s) << 40) |
                                             (static_cast<std::uint64_t>(level) << 20) |
                                             static_cast<std::uint64_t>(rep);
                auto [features, force] = sim.sense(s, levels[level], derive_seed(seed, stream));
                ds.samples.push_back({s, levels[level], force, std::move(features)});
            }
        }
    }
    return ds;
}

std::pair<CalibrationDataset, CalibrationDataset> split_dataset(const CalibrationDataset& ds,
                                                                double train_fraction,
                                                                std::uint64_t seed) {
    ds.validate();
    const std::size_t n = ds.size();
    if (n < 10) throw DatasetError("need at least 10 samples to split, got " + std::to_string(n));
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw DatasetError("train_fraction must be in (0, 1)");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng.below(i + 1)]);

    const auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(n)));
    CalibrationDataset train, test;
    train.provenance = ds.provenance;
    test.provenance = ds.provenance;
    train.samples.reserve(n_train);
    test.samples.reserve(n - n_train);
    for (std::size_t i = 0; i < n; ++i)
        (i < n_train ? train : test).samples.push_back(ds.samples[order[i]]);
    return {std::move(train), std::move(test)};
}

} // namespace astbench
