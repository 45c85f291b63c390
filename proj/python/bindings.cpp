#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "astbench/config.hpp"
#include "astbench/errors.hpp"
#include "astbench/gp.hpp"
#include "astbench/grip.hpp"
#include "astbench/io.hpp"
#include "astbench/model.hpp"
#include "astbench/rng.hpp"
#include "astbench/signal.hpp"
#include "astbench/skin.hpp"
#include "astbench/trial.hpp"

namespace py = pybind11;
using namespace astbench;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Acoustic soft-tactile skin workbench: synthetic sensor, force calibration, "
              "and grip-control trials";

    py::register_exception<Error>(m, "WorkbenchError");

    // signal
    py::class_<SignalConfig>(m, "SignalConfig")
        .def(py::init<>())
        .def_readwrite("sample_rate", &SignalConfig::sample_rate)
        .def_readwrite("frame_len", &SignalConfig::frame_len)
        .def_readwrite("tone_freqs", &SignalConfig::tone_freqs)
        .def_readwrite("tone_amp", &SignalConfig::tone_amp)
        .def("bin_width", &SignalConfig::bin_width)
        .def("num_bands", &SignalConfig::num_bands)
        .def("validate", &SignalConfig::validate);
    py::class_<TimeSignal>(m, "TimeSignal")
        .def(py::init<>())
        .def_readwrite("samples", &TimeSignal::samples);
    py::class_<SpectrumFeatures>(m, "SpectrumFeatures")
        .def(py::init<>())
        .def(py::init([](std::vector<double> bands) {
                 SpectrumFeatures f;
                 f.bands = std::move(bands);
                 return f;
             }),
             py::arg("bands"))
        .def_readwrite("bands", &SpectrumFeatures::bands)
        .def("__len__", &SpectrumFeatures::size);
    m.def("default_tone_freqs", &default_tone_freqs, py::arg("sample_rate"),
          py::arg("frame_len"), py::arg("count") = 16, py::arg("lo_hz") = 200.0,
          py::arg("hi_hz") = 15000.0);
    m.def("synth_reference", &synth_reference);
    m.def("fft_magnitude", &fft_magnitude);
    m.def("band_features", &band_features);
    m.def("reference_features", &reference_features);

    // skin
    py::class_<SkinGeometry>(m, "SkinGeometry")
        .def(py::init<>())
        .def_readwrite("channel_diameter", &SkinGeometry::channel_diameter)
        .def_readwrite("cover_thickness", &SkinGeometry::cover_thickness)
        .def_readwrite("calibrated_length", &SkinGeometry::calibrated_length)
        .def_readwrite("n_subsections", &SkinGeometry::n_subsections)
        .def_readwrite("subsection_gap", &SkinGeometry::subsection_gap);
    py::class_<ContactModel>(m, "ContactModel")
        .def(py::init<>())
        .def_readwrite("c1", &ContactModel::c1)
        .def_readwrite("c2", &ContactModel::c2)
        .def_readwrite("max_force", &ContactModel::max_force);
    py::class_<AttenuationModel>(m, "AttenuationModel")
        .def(py::init<>())
        .def_readwrite("alpha0", &AttenuationModel::alpha0)
        .def_readwrite("alpha1", &AttenuationModel::alpha1)
        .def_readwrite("noise_sigma", &AttenuationModel::noise_sigma)
        .def_readwrite("rng_seed", &AttenuationModel::rng_seed);
    py::class_<ContactState>(m, "ContactState")
        .def_readonly("subsection", &ContactState::subsection)
        .def_readonly("depth", &ContactState::depth)
        .def_readonly("force", &ContactState::force)
        .def_readonly("area_ratio", &ContactState::area_ratio);
    m.def("contact_force", &contact_force, py::arg("depth_mm"), py::arg("contact_model"));
    m.def("contact_depth_for_force", &contact_depth_for_force, py::arg("force_n"),
          py::arg("contact_model"));
    m.def("channel_constriction", &channel_constriction, py::arg("depth_mm"),
          py::arg("geometry"));
    m.def("transmit",
          py::overload_cast<const SpectrumFeatures&, double, const AttenuationModel&,
                            std::uint64_t>(&transmit),
          py::arg("ref_features"), py::arg("area_ratio"), py::arg("attenuation"),
          py::arg("noise_seed"));
    m.def("transmit",
          py::overload_cast<const SpectrumFeatures&, double, const AttenuationModel&>(
              &transmit),
          py::arg("ref_features"), py::arg("area_ratio"), py::arg("attenuation"));
    py::class_<SkinSimulator>(m, "SkinSimulator")
        .def(py::init<SkinGeometry, ContactModel, AttenuationModel, SignalConfig>(),
             py::arg("geometry"), py::arg("contact"), py::arg("attenuation"),
             py::arg("signal_config"))
        .def("sense",
             py::overload_cast<int, double, std::uint64_t>(&SkinSimulator::sense,
                                                           py::const_),
             py::arg("subsection"), py::arg("depth_mm"), py::arg("noise_seed"))
        .def("sense", py::overload_cast<int, double>(&SkinSimulator::sense, py::const_),
             py::arg("subsection"), py::arg("depth_mm"))
        .def("contact_state", &SkinSimulator::contact_state, py::arg("subsection"),
             py::arg("depth_mm"))
        .def_property_readonly("reference", &SkinSimulator::reference)
        .def("subsection_gain", &SkinSimulator::subsection_gain);

    // calibration dataset
    py::class_<CalibrationSample>(m, "CalibrationSample")
        .def(py::init<>())
        .def_readwrite("subsection", &CalibrationSample::subsection)
        .def_readwrite("depth_mm", &CalibrationSample::depth_mm)
        .def_readwrite("force_n", &CalibrationSample::force_n)
        .def_readwrite("features", &CalibrationSample::features);
    py::class_<SweepProvenance>(m, "SweepProvenance")
        .def(py::init<>())
        .def_readwrite("depth_step", &SweepProvenance::depth_step)
        .def_readwrite("force_stop", &SweepProvenance::force_stop)
        .def_readwrite("repeats", &SweepProvenance::repeats)
        .def_readwrite("seed", &SweepProvenance::seed);
    py::class_<CalibrationDataset>(m, "CalibrationDataset")
        .def(py::init<>())
        .def_readwrite("samples", &CalibrationDataset::samples)
        .def_readwrite("provenance", &CalibrationDataset::provenance)
        .def("__len__", &CalibrationDataset::size)
        .def("feature_dim", &CalibrationDataset::feature_dim)
        .def("validate", &CalibrationDataset::validate);
    py::class_<SweepProtocol>(m, "SweepProtocol")
        .def(py::init<>())
        .def_readwrite("depth_step", &SweepProtocol::depth_step)
        .def_readwrite("force_stop", &SweepProtocol::force_stop)
        .def_readwrite("repeats", &SweepProtocol::repeats);
    m.def("generate_dataset", &generate_dataset, py::arg("protocol"), py::arg("simulator"),
          py::arg("seed"));
    m.def("sweep_depth_levels", &sweep_depth_levels, py::arg("protocol"),
          py::arg("contact_model"));
    m.def("split_dataset", &split_dataset, py::arg("dataset"),
          py::arg("train_fraction") = 0.9, py::arg("seed") = 0);

    // models
    py::enum_<ModelKind>(m, "ModelKind")
        .value("LINEAR_LEAST_SQUARES", ModelKind::LinearLeastSquares)
        .value("REGRESSION_TREE", ModelKind::RegressionTree)
        .value("GP_RATIONAL_QUADRATIC", ModelKind::GpRationalQuadratic)
        .value("GP_SQUARED_EXPONENTIAL", ModelKind::GpSquaredExponential)
        .value("GP_MATERN_52", ModelKind::GpMatern52)
        .value("GP_EXPONENTIAL", ModelKind::GpExponential);
    m.def("model_kind_name", &model_kind_name);
    m.def("parse_model_kind", &parse_model_kind);
    py::class_<GpHyper>(m, "GpHyper")
        .def(py::init<>())
        .def_readwrite("sigma_f2", &GpHyper::sigma_f2)
        .def_readwrite("length_scale", &GpHyper::length_scale)
        .def_readwrite("sigma_n2", &GpHyper::sigma_n2)
        .def_readwrite("rq_alpha", &GpHyper::rq_alpha);
    py::class_<TreeHyper>(m, "TreeHyper")
        .def(py::init<>())
        .def_readwrite("max_depth", &TreeHyper::max_depth)
        .def_readwrite("min_leaf", &TreeHyper::min_leaf);
    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init<>())
        .def(py::init([](ModelKind kind) {
                 ModelSpec s;
                 s.kind = kind;
                 return s;
             }),
             py::arg("kind"))
        .def_readwrite("kind", &ModelSpec::kind)
        .def_readwrite("gp", &ModelSpec::gp)
        .def_readwrite("tree", &ModelSpec::tree);
    py::class_<RegressionModel>(m, "RegressionModel")
        .def("predict", &RegressionModel::predict)
        .def_property_readonly("spec", &RegressionModel::spec)
        .def("feature_dim", &RegressionModel::feature_dim);
    py::class_<RankingEntry>(m, "RankingEntry")
        .def_readonly("spec", &RankingEntry::spec)
        .def_readonly("rmse", &RankingEntry::rmse)
        .def_readonly("ok", &RankingEntry::ok)
        .def_readonly("error", &RankingEntry::error);
    py::class_<ToleranceReport>(m, "ToleranceReport")
        .def_readonly("thresholds", &ToleranceReport::thresholds)
        .def_readonly("pct_within", &ToleranceReport::pct_within)
        .def_readonly("mae", &ToleranceReport::mae)
        .def_readonly("mae_std", &ToleranceReport::mae_std)
        .def_readonly("rmse", &ToleranceReport::rmse);
    m.def("train_model", &train_model, py::arg("train"), py::arg("spec"));
    m.def("predict", py::overload_cast<const RegressionModel&, const SpectrumFeatures&>(
                         &predict));
    m.def("cross_validate", &cross_validate, py::arg("dataset"), py::arg("spec"),
          py::arg("k") = 10, py::arg("seed") = 0);
    m.def("select_model", &select_model, py::arg("dataset"), py::arg("specs"),
          py::arg("k") = 10, py::arg("seed") = 0);
    m.def("tolerance_report", &tolerance_report, py::arg("model"), py::arg("test"));
    m.def("default_model_specs", &default_model_specs);

    // grip control
    py::class_<GripSizing>(m, "GripSizing")
        .def(py::init<>())
        .def_readwrite("mass_kg", &GripSizing::mass_kg)
        .def_readwrite("gravity", &GripSizing::gravity)
        .def_readwrite("accel", &GripSizing::accel)
        .def_readwrite("mu", &GripSizing::mu)
        .def_readwrite("safety_factor", &GripSizing::safety_factor);
    m.def("required_grip_force", &required_grip_force);
    py::enum_<DeadbandStatus>(m, "DeadbandStatus")
        .value("BELOW", DeadbandStatus::Below)
        .value("WITHIN", DeadbandStatus::Within)
        .value("ABOVE", DeadbandStatus::Above);
    py::enum_<GripDecision>(m, "GripDecision")
        .value("CLOSE", GripDecision::Close)
        .value("HOLD", GripDecision::Hold)
        .value("OPEN", GripDecision::Open);
    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("target_force", &ControllerConfig::target_force)
        .def_readwrite("epsilon", &ControllerConfig::epsilon)
        .def_readwrite("step_mm", &ControllerConfig::step_mm)
        .def_readwrite("width_min", &ControllerConfig::width_min)
        .def_readwrite("width_max", &ControllerConfig::width_max)
        .def_readwrite("abort_force", &ControllerConfig::abort_force);
    py::class_<ControllerState>(m, "ControllerState")
        .def(py::init<>())
        .def(py::init([](double width) {
                 return ControllerState{width, GripDecision::Hold};
             }),
             py::arg("width_mm"))
        .def_readwrite("width_mm", &ControllerState::width_mm)
        .def_readwrite("last_decision", &ControllerState::last_decision);
    m.def("deadband_status", &deadband_status, py::arg("measured_force"), py::arg("config"));
    m.def("controller_step", &controller_step, py::arg("state"), py::arg("measured_force"),
          py::arg("config"));

    // trials
    py::class_<StrawberrySample>(m, "StrawberrySample")
        .def(py::init<>())
        .def(py::init([](int id, double weight, double diameter) {
                 return StrawberrySample{id, weight, diameter};
             }),
             py::arg("id"), py::arg("weight_n"), py::arg("peduncle_diameter_mm"))
        .def_readwrite("id", &StrawberrySample::id)
        .def_readwrite("weight_n", &StrawberrySample::weight_n)
        .def_readwrite("peduncle_diameter_mm", &StrawberrySample::peduncle_diameter_mm);
    m.def("strawberry_fixture", &strawberry_fixture);
    py::class_<TrialConfig>(m, "TrialConfig")
        .def(py::init<>())
        .def_readwrite("tick_s", &TrialConfig::tick_s)
        .def_readwrite("initial_width_mm", &TrialConfig::initial_width_mm)
        .def_readwrite("compliance", &TrialConfig::compliance)
        .def_readwrite("transport_duration_s", &TrialConfig::transport_duration_s)
        .def_readwrite("swing_amp_n", &TrialConfig::swing_amp_n)
        .def_readwrite("swing_freq_hz", &TrialConfig::swing_freq_hz)
        .def_readwrite("seed", &TrialConfig::seed)
        .def_readwrite("max_grip_ticks", &TrialConfig::max_grip_ticks);
    py::enum_<TrialPhase>(m, "TrialPhase")
        .value("APPROACH", TrialPhase::Approach)
        .value("GRIP", TrialPhase::Grip)
        .value("TRANSPORT", TrialPhase::Transport)
        .value("RELEASE", TrialPhase::Release);
    py::class_<TrialRecord>(m, "TrialRecord")
        .def_readonly("t", &TrialRecord::t)
        .def_readonly("phase", &TrialRecord::phase)
        .def_readonly("measured_force", &TrialRecord::measured_force)
        .def_readonly("true_force", &TrialRecord::true_force)
        .def_readonly("grip_width", &TrialRecord::grip_width);
    py::class_<TrialLog>(m, "TrialLog")
        .def(py::init<>())
        .def_readwrite("records", &TrialLog::records)
        .def_readwrite("sample_id", &TrialLog::sample_id)
        .def_readwrite("seed", &TrialLog::seed)
        .def_readwrite("subsection", &TrialLog::subsection)
        .def("__len__", [](const TrialLog& log) { return log.records.size(); });
    py::class_<PhaseBoundaries>(m, "PhaseBoundaries")
        .def_readonly("s1", &PhaseBoundaries::s1)
        .def_readonly("s2", &PhaseBoundaries::s2)
        .def_readonly("s3", &PhaseBoundaries::s3);
    m.def("run_trial", &run_trial, py::arg("sample"), py::arg("model"), py::arg("config"),
          py::arg("controller_config"), py::arg("simulator"));
    m.def("segment_phases", &segment_phases);
    m.def("trial_mae", &trial_mae, py::arg("log"), py::arg("target_force"));
    m.def("slip_check", &slip_check, py::arg("log"), py::arg("sample"), py::arg("mu") = 0.5,
          py::arg("safety_factor") = 2.0, py::arg("a_max") = 1.0);
    py::class_<CampaignReport>(m, "CampaignReport")
        .def_readonly("samples", &CampaignReport::samples)
        .def_readonly("mae", &CampaignReport::mae)
        .def_readonly("slips", &CampaignReport::slips)
        .def_readonly("failures", &CampaignReport::failures)
        .def_readonly("sample_avg_mae", &CampaignReport::sample_avg_mae)
        .def_readonly("max_avg_mae", &CampaignReport::max_avg_mae)
        .def_readonly("max_trial_mae", &CampaignReport::max_trial_mae)
        .def_readonly("total_slip_events", &CampaignReport::total_slip_events)
        .def_readonly("abort_count", &CampaignReport::abort_count)
        .def_readonly("trials_per_sample", &CampaignReport::trials_per_sample)
        .def_readonly("seed", &CampaignReport::seed);
    py::class_<CampaignResult>(m, "CampaignResult")
        .def_readonly("report", &CampaignResult::report)
        .def_readonly("logs", &CampaignResult::logs);
    m.def("run_campaign", &run_campaign, py::arg("samples"), py::arg("trials_per_sample"),
          py::arg("model"), py::arg("config"), py::arg("controller_config"),
          py::arg("simulator"), py::arg("seed"));

    // persistence
    m.def("write_dataset", &write_dataset, py::arg("dataset"), py::arg("path"));
    m.def("read_dataset", &read_dataset, py::arg("path"));
    m.def("save_model", &save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &load_model, py::arg("path"));
    m.def("model_to_json", &model_to_json);
    m.def("model_from_json", &model_from_json);
    m.def("write_trial_log", &write_trial_log, py::arg("log"), py::arg("path"));
    m.def("read_trial_log", &read_trial_log, py::arg("path"));
    m.def("write_campaign_report", &write_campaign_report, py::arg("report"), py::arg("path"));
    m.def("read_campaign_report", &read_campaign_report, py::arg("path"));
    m.def("read_samples_csv", &read_samples_csv, py::arg("path"));

    // workbench config
    py::class_<WorkbenchConfig>(m, "WorkbenchConfig")
        .def(py::init<>())
        .def_readwrite("signal", &WorkbenchConfig::signal)
        .def_readwrite("geometry", &WorkbenchConfig::geometry)
        .def_readwrite("contact", &WorkbenchConfig::contact)
        .def_readwrite("attenuation", &WorkbenchConfig::attenuation)
        .def_readwrite("protocol", &WorkbenchConfig::protocol)
        .def_readwrite("controller", &WorkbenchConfig::controller)
        .def_readwrite("trial", &WorkbenchConfig::trial)
        .def_readwrite("trials_per_sample", &WorkbenchConfig::trials_per_sample)
        .def_readwrite("seed", &WorkbenchConfig::seed)
        .def("validate", &WorkbenchConfig::validate)
        .def("make_simulator", &WorkbenchConfig::make_simulator);
    m.def("load_workbench_config", &load_workbench_config, py::arg("path"));
    m.def("apply_config_entry", &apply_config_entry, py::arg("config"), py::arg("key"),
          py::arg("value"));

    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));

    m.attr("__version__") = "0.1.0";
}
