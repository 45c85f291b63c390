#include "astbench/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "astbench/errors.hpp"

namespace astbench {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

double parse_double_field(const std::string& text, std::size_t line_no) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric field '" + text +
                         "'");
    return value;
}

int parse_int_field(const std::string& text, std::size_t line_no) {
    int value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("line " + std::to_string(line_no) + ": bad integer field '" + text +
                         "'");
    return value;
}

std::string feature_column_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "f_%03u", static_cast<unsigned>(i));
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for reading");
    return in;
}

json spec_to_json(const ModelSpec& spec) {
    json j;
    j["kind"] = model_kind_name(spec.kind);
    if (is_gp_kind(spec.kind)) {
        json gp;
        if (spec.gp.sigma_f2) gp["sigma_f2"] = *spec.gp.sigma_f2;
        if (spec.gp.length_scale) gp["length_scale"] = *spec.gp.length_scale;
        if (spec.gp.sigma_n2) gp["sigma_n2"] = *spec.gp.sigma_n2;
        gp["rq_alpha"] = spec.gp.rq_alpha;
        j["gp"] = gp;
    } else if (spec.kind == ModelKind::RegressionTree) {
        j["tree"] = {{"max_depth", spec.tree.max_depth}, {"min_leaf", spec.tree.min_leaf}};
    }
    return j;
}

ModelSpec spec_from_json(const json& j) {
    ModelSpec spec;
    spec.kind = parse_model_kind(j.at("kind").get<std::string>());
    if (j.contains("gp")) {
        const json& gp = j.at("gp");
        if (gp.contains("sigma_f2")) spec.gp.sigma_f2 = gp.at("sigma_f2").get<double>();
        if (gp.contains("length_scale"))
            spec.gp.length_scale = gp.at("length_scale").get<double>();
        if (gp.contains("sigma_n2")) spec.gp.sigma_n2 = gp.at("sigma_n2").get<double>();
        if (gp.contains("rq_alpha")) spec.gp.rq_alpha = gp.at("rq_alpha").get<double>();
    }
    if (j.contains("tree")) {
        spec.tree.max_depth = j.at("tree").at("max_depth").get<int>();
        spec.tree.min_leaf = j.at("tree").at("min_leaf").get<int>();
    }
    return spec;
}

} // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    if (ec != std::errc()) throw Error("failed to format double");
    return {buf, ptr};
}

void write_dataset(const CalibrationDataset& ds, const std::filesystem::path& path) {
    ds.validate();
    const std::size_t dim = ds.feature_dim();
    std::ofstream out = open_for_write(path);
    out << "subsection,depth_mm,force_n";
    for (std::size_t i = 0; i < dim; ++i) out << ',' << feature_column_name(i);
    out << '\n';
    for (const auto& s : ds.samples) {
        out << s.subsection << ',' << format_double(s.depth_mm) << ','
            << format_double(s.force_n);
        for (double b : s.features.bands) out << ',' << format_double(b);
        out << '\n';
    }
    if (!out) throw Error("failed writing " + path.string());
}

CalibrationDataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header in " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 4 || header[0] != "subsection" || header[1] != "depth_mm" ||
        header[2] != "force_n")
        throw ParseError("line 1: header must start with subsection,depth_mm,force_n");
    const std::size_t dim = header.size() - 3;
    for (std::size_t i = 0; i < dim; ++i)
        if (header[3 + i] != feature_column_name(i))
            throw ParseError("line 1: expected feature column '" + feature_column_name(i) +
                             "', got '" + header[3 + i] + "'");

    CalibrationDataset ds;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 3 + dim)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(3 + dim) + " columns, got " +
                             std::to_string(fields.size()));
        CalibrationSample s;
        s.subsection = parse_int_field(fields[0], line_no);
        s.depth_mm = parse_double_field(fields[1], line_no);
        s.force_n = parse_double_field(fields[2], line_no);
        s.features.bands.reserve(dim);
        for (std::size_t i = 0; i < dim; ++i)
            s.features.bands.push_back(parse_double_field(fields[3 + i], line_no));
        ds.samples.push_back(std::move(s));
    }
    if (ds.samples.empty())
        throw ParseError("line " + std::to_string(line_no) + ": no data rows in " +
                         path.string());
    return ds;
}

std::string model_to_json(const RegressionModel& model) {
    json j;
    j["format_version"] = kFormatVersion;
    j["spec"] = spec_to_json(model.spec());
    j["standardization"] = {{"feature_mean", model.standardizer().feature_mean},
                            {"feature_scale", model.standardizer().feature_scale},
                            {"label_mean", model.standardizer().label_mean}};
    json state;
    if (model.is_linear()) {
        state["weights"] = model.linear_state().weights;
        state["intercept"] = model.linear_state().intercept;
    } else if (model.is_tree()) {
        json nodes = json::array();
        for (const TreeNode& n : model.tree_state().nodes)
            nodes.push_back({{"feature", n.feature},
                             {"threshold", n.threshold},
                             {"left", n.left},
                             {"right", n.right},
                             {"value", n.value}});
        state["nodes"] = std::move(nodes);
    } else {
        const GpState& gp = model.gp_state();
        json rows = json::array();
        for (std::size_t i = 0; i < gp.train_inputs.rows(); ++i) {
            json row = json::array();
            for (std::size_t c = 0; c < gp.train_inputs.cols(); ++c)
                row.push_back(gp.train_inputs(i, c));
            rows.push_back(std::move(row));
        }
        state["train_inputs"] = std::move(rows);
        state["alpha"] = gp.alpha;
        state["sigma_f2"] = gp.sigma_f2;
        state["length_scale"] = gp.length_scale;
        state["sigma_n2"] = gp.sigma_n2;
        state["rq_alpha"] = gp.rq_alpha;
    }
    j["state"] = std::move(state);
    return j.dump(2) + "\n";
}

RegressionModel model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model JSON does not parse: ") + e.what());
    }
    try {
        if (!j.contains("format_version"))
            throw FormatError("model JSON missing format_version");
        const int version = j.at("format_version").get<int>();
        if (version != kFormatVersion)
            throw FormatError("unsupported model format_version " + std::to_string(version) +
                              ", expected " + std::to_string(kFormatVersion));
        if (!j.contains("spec") || !j.contains("standardization") || !j.contains("state"))
            throw FormatError("model JSON missing spec, standardization, or state");

        const ModelSpec spec = spec_from_json(j.at("spec"));
        Standardizer st;
        const json& stz = j.at("standardization");
        st.feature_mean = stz.at("feature_mean").get<std::vector<double>>();
        st.feature_scale = stz.at("feature_scale").get<std::vector<double>>();
        st.label_mean = stz.at("label_mean").get<double>();

        const json& state = j.at("state");
        if (spec.kind == ModelKind::LinearLeastSquares) {
            LinearState lin;
            lin.weights = state.at("weights").get<std::vector<double>>();
            lin.intercept = state.at("intercept").get<double>();
            return {spec, std::move(st), std::move(lin)};
        }
        if (spec.kind == ModelKind::RegressionTree) {
            TreeState tree;
            for (const json& n : state.at("nodes"))
                tree.nodes.push_back({n.at("feature").get<int>(),
                                      n.at("threshold").get<double>(), n.at("left").get<int>(),
                                      n.at("right").get<int>(), n.at("value").get<double>()});
            if (tree.nodes.empty()) throw FormatError("tree state has no nodes");
            return {spec, std::move(st), std::move(tree)};
        }
        GpState gp;
        const json& rows = state.at("train_inputs");
        const std::size_t n = rows.size();
        const std::size_t dim = st.feature_mean.size();
        gp.train_inputs = Matrix(n, dim);
        for (std::size_t i = 0; i < n; ++i) {
            const json& row = rows.at(i);
            if (row.size() != dim) throw FormatError("gp train_inputs row width mismatch");
            for (std::size_t c = 0; c < dim; ++c)
                gp.train_inputs(i, c) = row.at(c).get<double>();
        }
        gp.alpha = state.at("alpha").get<std::vector<double>>();
        if (gp.alpha.size() != n) throw FormatError("gp alpha length mismatch");
        gp.sigma_f2 = state.at("sigma_f2").get<double>();
        gp.length_scale = state.at("length_scale").get<double>();
        gp.sigma_n2 = state.at("sigma_n2").get<double>();
        gp.rq_alpha = state.at("rq_alpha").get<double>();
        return {spec, std::move(st), std::move(gp)};
    } catch (const json::exception& e) {
        throw FormatError(std::string("model JSON malformed: ") + e.what());
    }
}

void save_model(const RegressionModel& model, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    out << model_to_json(model);
    if (!out) throw Error("failed writing " + path.string());
}

RegressionModel load_model(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str());
}

void write_trial_log(const TrialLog& log, const std::filesystem::path& path) {
    std::ofstream out = open_for_write(path);
    for (const TrialRecord& r : log.records) {
        json j = {{"t", r.t},
                  {"phase", to_string(r.phase)},
                  {"f_m", r.measured_force},
                  {"f_true", r.true_force},
                  {"g_t", r.grip_width}};
        out << j.dump() << '\n';
    }
    if (!out) throw Error("failed writing " + path.string());
}

TrialLog read_trial_log(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    TrialLog log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
            log.records.push_back({j.at("t").get<double>(),
                                   parse_trial_phase(j.at("phase").get<std::string>()),
                                   j.at("f_m").get<double>(), j.at("f_true").get<double>(),
                                   j.at("g_t").get<double>()});
        } catch (const json::exception& e) {
            throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return log;
}

void write_campaign_report(const CampaignReport& report, const std::filesystem::path& path) {
    json samples = json::array();
    for (const StrawberrySample& s : report.samples)
        samples.push_back({{"id", s.id},
                           {"weight_n", s.weight_n},
                           {"peduncle_diameter_mm", s.peduncle_diameter_mm}});
    const json j = {{"format_version", kFormatVersion},
                    {"seed", report.seed},
                    {"trials_per_sample", report.trials_per_sample},
                    {"samples", std::move(samples)},
                    {"mae_matrix", report.mae},
                    {"sample_avg_mae", report.sample_avg_mae},
                    {"max_avg_mae", report.max_avg_mae},
                    {"max_trial_mae", report.max_trial_mae},
                    {"slip_matrix", report.slips},
                    {"total_slip_events", report.total_slip_events},
                    {"abort_count", report.abort_count},
                    {"failures", report.failures}};
    std::ofstream out = open_for_write(path);
    out << j.dump(2) << '\n';
    if (!out) throw Error("failed writing " + path.string());
}

std::vector<StrawberrySample> read_samples_csv(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("line 1: missing header in " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (split_csv_line(line) != std::vector<std::string>{"id", "weight_n", "peduncle_diameter_mm"})
        throw ParseError("line 1: header must be id,weight_n,peduncle_diameter_mm");
    std::vector<StrawberrySample> samples;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 3)
            throw ParseError("line " + std::to_string(line_no) + ": expected 3 columns, got " +
                             std::to_string(fields.size()));
        StrawberrySample s{parse_int_field(fields[0], line_no),
                           parse_double_field(fields[1], line_no),
                           parse_double_field(fields[2], line_no)};
        s.validate();
        samples.push_back(s);
    }
    if (samples.empty()) throw ParseError("no sample rows in " + path.string());
    return samples;
}

CampaignReport read_campaign_report(const std::filesystem::path& path) {
    std::ifstream in = open_for_read(path);
    json j;
    try {
        in >> j;
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw FormatError("unsupported campaign report format_version");
        CampaignReport report;
        for (const json& s : j.at("samples"))
            report.samples.push_back({s.at("id").get<int>(), s.at("weight_n").get<double>(),
                                      s.at("peduncle_diameter_mm").get<double>()});
        for (const json& row : j.at("mae_matrix")) {
            std::vector<double> maes;
            for (const json& v : row)
                maes.push_back(v.is_null() ? std::nan("") : v.get<double>());
            report.mae.push_back(std::move(maes));
        }
        report.slips = j.at("slip_matrix").get<std::vector<std::vector<std::size_t>>>();
        for (const json& v : j.at("sample_avg_mae"))
            report.sample_avg_mae.push_back(v.is_null() ? std::nan("") : v.get<double>());
        report.max_avg_mae = j.at("max_avg_mae").get<double>();
        report.max_trial_mae = j.at("max_trial_mae").get<double>();
        report.total_slip_events = j.at("total_slip_events").get<std::size_t>();
        report.abort_count = j.at("abort_count").get<std::size_t>();
        report.failures = j.at("failures").get<std::vector<std::string>>();
        report.trials_per_sample = j.at("trials_per_sample").get<int>();
        report.seed = j.at("seed").get<std::uint64_t>();
        return report;
    } catch (const json::exception& e) {
        throw FormatError(std::string("campaign report malformed: ") + e.what());
    }
}

} // namespace astbench
