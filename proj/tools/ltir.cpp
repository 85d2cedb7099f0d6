#include "ltir/dsp.hpp"
#include "ltir/io.hpp"
#include "ltir/physics.hpp"
#include "ltir/receiver.hpp"
#include "ltir/reports.hpp"
#include "ltir/scene_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace {

constexpr const char* kVersion = "ltir 1.0.0";

using MetaEntries = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

ltir::Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scene file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return ltir::parse_scene_config(text.str());
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fn) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    fn(out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

struct PulseFlags {
    double width_ps = 1.0;
    double carrier_thz = 1.5;
    double amplitude_v = 1.0;
    double prf_mhz = 1.0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--pulse-width-ps", width_ps, "envelope FWHM [ps]");
        cmd->add_option("--carrier-thz", carrier_thz, "carrier frequency [THz]");
        cmd->add_option("--amplitude-v", amplitude_v, "pulse amplitude [V]");
        cmd->add_option("--prf-mhz", prf_mhz, "pulse repetition frequency [MHz]");
    }

    ltir::Pulse pulse() const {
        return {width_ps * 1e-12, carrier_thz * 1e12, amplitude_v, prf_mhz * 1e6};
    }

    void meta(MetaEntries& entries) const {
        entries.emplace_back("pulse_width_ps", fmt(width_ps));
        entries.emplace_back("carrier_thz", fmt(carrier_thz));
        entries.emplace_back("amplitude_v", fmt(amplitude_v));
        entries.emplace_back("prf_mhz", fmt(prf_mhz));
    }
};

std::vector<double> make_positions(double start_mm, double stop_mm, std::size_t count) {
    if (count < 1) throw std::runtime_error("scan count must be >= 1");
    if (count > 1 && stop_mm <= start_mm)
        throw std::runtime_error("scan stop must exceed start when count > 1");
    std::vector<double> positions(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
        positions[i] = (start_mm + (stop_mm - start_mm) * f) * 1e-3;
    }
    return positions;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pulsed low-THz imaging radar simulator for layered FRP inspection"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    // ---- resolve ---------------------------------------------------------
    auto* resolve = app.add_subcommand("resolve", "print resolution figures");
    double rv_width_ps = 1.0, rv_freq_thz = 1.5, rv_eps = 4.0, rv_depth_mm = 20.0;
    resolve->add_option("--pulse-width-ps", rv_width_ps, "pulse width [ps]");
    resolve->add_option("--frequency-thz", rv_freq_thz, "center frequency [THz]");
    resolve->add_option("--eps-r", rv_eps, "relative permittivity");
    resolve->add_option("--depth-mm", rv_depth_mm, "target depth [mm]");

    // ---- budget ----------------------------------------------------------
    auto* budget = app.add_subcommand("budget", "itemized link-budget ledger");
    std::string bd_scene;
    double bd_tx_mw = 1.0, bd_amp_db = 60.0, bd_loss_db = 10.0, bd_bw_ghz = 1.0;
    double bd_temp_k = 290.0, bd_fc_thz = 1.0, bd_gain_dbi = 7.0, bd_hpbw_deg = 40.0;
    double bd_received_nw = 0.0;
    std::string bd_rcs = "geometric", bd_out;
    budget->add_option("--scene", bd_scene, "scene config file")->required();
    budget->add_option("--tx-power-mw", bd_tx_mw, "transmit power [mW]");
    budget->add_option("--amp-gain-db", bd_amp_db, "total amplifier gain [dB]");
    budget->add_option("--misc-loss-db", bd_loss_db, "harness/connector loss [dB]");
    budget->add_option("--bandwidth-ghz", bd_bw_ghz, "RF bandwidth [GHz]");
    budget->add_option("--temperature-k", bd_temp_k, "noise temperature [K]");
    budget->add_option("--fc-thz", bd_fc_thz, "carrier frequency [THz]");
    budget->add_option("--antenna-gain-dbi", bd_gain_dbi, "Tx/Rx antenna gain [dBi]");
    budget->add_option("--hpbw-deg", bd_hpbw_deg, "half-power beamwidth [deg]");
    budget->add_option("--rcs", bd_rcs, "RCS model: geometric|flat_plate");
    budget->add_option("--received-nw", bd_received_nw,
                       "override received power [nW] for the SNR computation");
    budget->add_option("--out", bd_out, "directory for budget.csv");

    // ---- shared pipeline flags ------------------------------------------
    struct PipelineFlags {
        std::string scene_path, out_dir;
        double sample_rate_thz = 20.0, noise_rms_v = 0.0, window_ns = 0.0;
        std::uint64_t seed = 1;
        PulseFlags pulse;
        double gain_dbi = 9.3, hpbw_deg = 40.0;

        void attach(CLI::App* cmd, bool out_required) {
            cmd->add_option("--scene", scene_path, "scene config file")->required();
            auto* out = cmd->add_option("--out", out_dir, "output directory");
            if (out_required) out->required();
            cmd->add_option("--sample-rate-thz", sample_rate_thz, "simulation rate [THz]");
            cmd->add_option("--noise-rms-v", noise_rms_v, "additive noise RMS [V]");
            cmd->add_option("--window-ns", window_ns, "time window [ns], 0 = auto");
            cmd->add_option("--seed", seed, "noise seed");
            cmd->add_option("--antenna-gain-dbi", gain_dbi, "antenna gain [dBi]");
            cmd->add_option("--hpbw-deg", hpbw_deg, "half-power beamwidth [deg]");
            pulse.attach(cmd);
        }

        ltir::Antenna antenna() const {
            return {gain_dbi, hpbw_deg * std::numbers::pi / 180.0, pulse.carrier_thz * 1e12};
        }

        MetaEntries meta(const char* command) const {
            MetaEntries entries;
            entries.emplace_back("tool", kVersion);
            entries.emplace_back("command", command);
            entries.emplace_back("scene", scene_path);
            entries.emplace_back("sample_rate_thz", fmt(sample_rate_thz));
            entries.emplace_back("noise_rms_v", fmt(noise_rms_v));
            entries.emplace_back("window_ns", fmt(window_ns));
            entries.emplace_back("seed", std::to_string(seed));
            entries.emplace_back("antenna_gain_dbi", fmt(gain_dbi));
            entries.emplace_back("hpbw_deg", fmt(hpbw_deg));
            pulse.meta(entries);
            return entries;
        }
    };

    auto* ascan = app.add_subcommand("ascan", "synthesize one A-scan to CSV");
    PipelineFlags as_flags;
    double as_lateral_mm = 0.0;
    as_flags.attach(ascan, true);
    ascan->add_option("--lateral-mm", as_lateral_mm, "antenna scan position [mm]");

    auto* bscan = app.add_subcommand("bscan", "raw + clutter-removed B-scan (CSV and PGM)");
    PipelineFlags bs_flags;
    double bs_start_mm = -20.0, bs_stop_mm = 20.0;
    std::size_t bs_count = 41;
    bool bs_chain = false;
    bs_flags.attach(bscan, true);
    bscan->add_option("--scan-start-mm", bs_start_mm, "first scan position [mm]");
    bscan->add_option("--scan-stop-mm", bs_stop_mm, "last scan position [mm]");
    bscan->add_option("--scan-count", bs_count, "number of positions");
    bscan->add_flag("--chain", bs_chain, "run rows through the receiver chain");

    auto* detect = app.add_subcommand("detect", "B-scan, clutter removal and defect report");
    PipelineFlags dt_flags;
    double dt_start_mm = -20.0, dt_stop_mm = 20.0, dt_threshold = 5.0;
    std::size_t dt_count = 41;
    dt_flags.attach(detect, true);
    detect->add_option("--scan-start-mm", dt_start_mm, "first scan position [mm]");
    detect->add_option("--scan-stop-mm", dt_stop_mm, "last scan position [mm]");
    detect->add_option("--scan-count", dt_count, "number of positions");
    detect->add_option("--threshold", dt_threshold, "detection threshold factor");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*resolve) {
            std::cout << ltir::resolve_report(rv_width_ps * 1e-12, rv_freq_thz * 1e12, rv_eps,
                                              rv_depth_mm * 1e-3);
            return 0;
        }

        if (*budget) {
            const ltir::Scene scene = load_scene(bd_scene);
            if (scene.defects().empty())
                throw std::runtime_error("budget requires a scene with a defect target");
            const ltir::Antenna antenna{bd_gain_dbi, bd_hpbw_deg * std::numbers::pi / 180.0,
                                        bd_fc_thz * 1e12};
            ltir::BudgetLedger ledger = ltir::link_budget(
                scene, antenna, scene.defects().front(), bd_tx_mw * 1e-3, bd_amp_db,
                bd_loss_db, ltir::rcs_model_from_string(bd_rcs), bd_bw_ghz * 1e9, bd_temp_k);
            if (bd_received_nw > 0.0) {
                ledger.received_power_w = bd_received_nw * 1e-9;
                ledger.snr_db =
                    10.0 * std::log10(ledger.received_power_w / ledger.noise_power_w);
                std::cout << "received power overridden to " << bd_received_nw << " nW\n";
            }
            std::cout << ltir::budget_report_text(ledger);
            if (!bd_out.empty()) {
                std::filesystem::create_directories(bd_out);
                write_file(std::filesystem::path(bd_out) / "budget.csv",
                           [&](std::ostream& o) { o << ltir::budget_report_csv(ledger); });
            }
            return 0;
        }

        if (*ascan) {
            const ltir::Scene scene = load_scene(as_flags.scene_path);
            double window = as_flags.window_ns * 1e-9;
            if (window <= 0.0) {
                for (const ltir::Echo& echo : ltir::enumerate_echoes(
                         scene, as_flags.antenna(), as_lateral_mm * 1e-3))
                    window = std::max(window, echo.delay);
                window += 16.0 * as_flags.pulse.pulse().width;
            }
            const ltir::Waveform w = ltir::synthesize_ascan(
                scene, as_flags.antenna(), as_flags.pulse.pulse(),
                as_flags.sample_rate_thz * 1e12, window, as_lateral_mm * 1e-3,
                as_flags.noise_rms_v, as_flags.seed);
            std::filesystem::create_directories(as_flags.out_dir);
            const std::filesystem::path out(as_flags.out_dir);
            write_file(out / "ascan.csv",
                       [&](std::ostream& o) { ltir::write_waveform_csv(w, o); });
            MetaEntries meta = as_flags.meta("ascan");
            meta.emplace_back("lateral_mm", fmt(as_lateral_mm));
            meta.emplace_back("resolved_window_ns", fmt(window * 1e9));
            write_file(out / "run.meta",
                       [&](std::ostream& o) { ltir::write_run_meta(meta, o); });
            return 0;
        }

        auto run_bscan = [&](const PipelineFlags& flags, double start_mm, double stop_mm,
                             std::size_t count, bool chain,
                             MetaEntries& meta) -> ltir::Radargram {
            const ltir::Scene scene = load_scene(flags.scene_path);
            ltir::BscanOptions options;
            options.sample_rate = flags.sample_rate_thz * 1e12;
            options.window = flags.window_ns * 1e-9;
            ltir::ChainConfig cfg;
            if (chain) options.chain = &cfg;
            const std::vector<double> positions = make_positions(start_mm, stop_mm, count);
            ltir::Radargram r =
                ltir::build_bscan(scene, flags.antenna(), flags.pulse.pulse(), positions,
                                  flags.noise_rms_v, flags.seed, options);
            meta.emplace_back("scan_start_mm", fmt(start_mm));
            meta.emplace_back("scan_stop_mm", fmt(stop_mm));
            meta.emplace_back("scan_count", std::to_string(count));
            meta.emplace_back("receiver_chain", chain ? "on" : "off");
            if (chain) {
                const ltir::IirFilter rf = ltir::design_elliptic_bandpass(
                    cfg.rf_filter, 1.0 / (r.time_axis[1] - r.time_axis[0]));
                std::filesystem::create_directories(flags.out_dir);
                write_file(std::filesystem::path(flags.out_dir) / "rf_filter_sos.csv",
                           [&](std::ostream& o) { rf.export_csv(o); });
            }
            return r;
        };

        if (*bscan) {
            MetaEntries meta = bs_flags.meta("bscan");
            const ltir::Radargram raw =
                run_bscan(bs_flags, bs_start_mm, bs_stop_mm, bs_count, bs_chain, meta);
            const ltir::Radargram cleaned = ltir::remove_clutter(raw);
            std::filesystem::create_directories(bs_flags.out_dir);
            const std::filesystem::path out(bs_flags.out_dir);
            write_file(out / "bscan_raw.csv",
                       [&](std::ostream& o) { ltir::write_radargram_csv(raw, o); });
            write_file(out / "bscan_raw.pgm",
                       [&](std::ostream& o) { ltir::write_radargram_pgm(raw, o); });
            write_file(out / "bscan_clutter_removed.csv",
                       [&](std::ostream& o) { ltir::write_radargram_csv(cleaned, o); });
            write_file(out / "bscan_clutter_removed.pgm",
                       [&](std::ostream& o) { ltir::write_radargram_pgm(cleaned, o); });
            write_file(out / "run.meta",
                       [&](std::ostream& o) { ltir::write_run_meta(meta, o); });
            return 0;
        }

        if (*detect) {
            MetaEntries meta = dt_flags.meta("detect");
            meta.emplace_back("threshold", fmt(dt_threshold));
            const ltir::Radargram raw =
                run_bscan(dt_flags, dt_start_mm, dt_stop_mm, dt_count, false, meta);
            const ltir::Radargram cleaned = ltir::remove_clutter(raw);
            const ltir::Scene scene = load_scene(dt_flags.scene_path);
            const std::vector<ltir::Detection> detections =
                ltir::detect_defects(cleaned, scene, dt_threshold);
            std::filesystem::create_directories(dt_flags.out_dir);
            const std::filesystem::path out(dt_flags.out_dir);
            write_file(out / "detections.csv",
                       [&](std::ostream& o) { ltir::write_detections_csv(detections, o); });
            write_file(out / "run.meta",
                       [&](std::ostream& o) { ltir::write_run_meta(meta, o); });
            std::cout << detections.size() << " detection(s)\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
