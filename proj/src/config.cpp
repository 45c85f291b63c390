#include "astbench/config.hpp"

#include <charconv>
#include <fstream>

#include "astbench/errors.hpp"

namespace astbench {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("config key '" + key + "': bad numeric value '" + value + "'");
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("config key '" + key + "': bad integer value '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("config key '" + key + "': bad seed value '" + value + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::string::size_type start = 0;
    while (start <= value.size()) {
        auto pos = value.find(',', start);
        if (pos == std::string::npos) pos = value.size();
        const std::string item = trim(value.substr(start, pos - start));
        if (!item.empty()) out.push_back(parse_double(key, item));
        start = pos + 1;
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

} // namespace

void WorkbenchConfig::validate() const {
    signal.validate();
    geometry.validate();
    contact.validate();
    attenuation.validate();
    protocol.validate();
    controller.validate();
    trial.validate();
    if (trials_per_sample < 1) throw ConfigError("trials_per_sample must be positive");
}

SkinSimulator WorkbenchConfig::make_simulator() const {
    return {geometry, contact, attenuation, signal};
}

void apply_config_entry(WorkbenchConfig& cfg, const std::string& key,
                        const std::string& value) {
    if (key == "sample_rate") cfg.signal.sample_rate = parse_double(key, value);
    else if (key == "frame_len") cfg.signal.frame_len = static_cast<std::size_t>(parse_int(key, value));
    else if (key == "tone_amp") cfg.signal.tone_amp = parse_double(key, value);
    else if (key == "tone_freqs") cfg.signal.tone_freqs = parse_double_list(key, value);
    else if (key == "channel_diameter") cfg.geometry.channel_diameter = parse_double(key, value);
    else if (key == "cover_thickness") cfg.geometry.cover_thickness = parse_double(key, value);
    else if (key == "calibrated_length") cfg.geometry.calibrated_length = parse_double(key, value);
    else if (key == "n_subsections") cfg.geometry.n_subsections = static_cast<int>(parse_int(key, value));
    else if (key == "subsection_gap") cfg.geometry.subsection_gap = parse_double(key, value);
    else if (key == "c1") cfg.contact.c1 = parse_double(key, value);
    else if (key == "c2") cfg.contact.c2 = parse_double(key, value);
    else if (key == "max_force") cfg.contact.max_force = parse_double(key, value);
    else if (key == "alpha0") cfg.attenuation.alpha0 = parse_double(key, value);
    else if (key == "alpha1") cfg.attenuation.alpha1 = parse_double(key, value);
    else if (key == "noise_sigma") cfg.attenuation.noise_sigma = parse_double(key, value);
    else if (key == "depth_step") cfg.protocol.depth_step = parse_double(key, value);
    else if (key == "force_stop") cfg.protocol.force_stop = parse_double(key, value);
    else if (key == "repeats") cfg.protocol.repeats = static_cast<int>(parse_int(key, value));
    else if (key == "f_d") cfg.controller.target_force = parse_double(key, value);
    else if (key == "epsilon") cfg.controller.epsilon = parse_double(key, value);
    else if (key == "sigma_h") cfg.controller.step_mm = parse_double(key, value);
    else if (key == "g_min") cfg.controller.width_min = parse_double(key, value);
    else if (key == "g_max") cfg.controller.width_max = parse_double(key, value);
    else if (key == "f_abort") cfg.controller.abort_force = parse_double(key, value);
    else if (key == "tick") cfg.trial.tick_s = parse_double(key, value);
    else if (key == "initial_width") cfg.trial.initial_width_mm = parse_double(key, value);
    else if (key == "compliance") cfg.trial.compliance = parse_double(key, value);
    else if (key == "transport_duration") cfg.trial.transport_duration_s = parse_double(key, value);
    else if (key == "swing_amp") cfg.trial.swing_amp_n = parse_double(key, value);
    else if (key == "swing_freq") cfg.trial.swing_freq_hz = parse_double(key, value);
    else if (key == "trials_per_sample") cfg.trials_per_sample = static_cast<int>(parse_int(key, value));
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

WorkbenchConfig load_workbench_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    WorkbenchConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string content = trim(line);
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + content + "'");
        apply_config_entry(cfg, trim(content.substr(0, eq)), trim(content.substr(eq + 1)));
    }
    cfg.trial.seed = cfg.seed;
    cfg.attenuation.rng_seed = cfg.seed;
    cfg.validate();
    return cfg;
}

} // namespace astbench
