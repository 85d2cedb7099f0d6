#include "ltir/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ltir {

namespace {

std::string fmt(const char* format, double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, format, v);
    return buffer;
}

} // namespace

void write_waveform_csv(const Waveform& w, std::ostream& out) {
    out << "time_ns,volts\n";
    for (std::size_t i = 0; i < w.size(); ++i)
        out << fmt("%.9f", w.time_at(i) * 1e9) << ',' << fmt("%.9g", w.samples[i]) << '\n';
}

void write_radargram_csv(const Radargram& r, std::ostream& out) {
    out << "position_mm";
    for (double t : r.time_axis) out << ',' << fmt("%.9f", t * 1e9);
    out << '\n';
    for (std::size_t i = 0; i < r.amplitudes.size(); ++i) {
        out << fmt("%.6f", r.positions[i] * 1e3);
        for (double v : r.amplitudes[i]) out << ',' << fmt("%.9g", v);
        out << '\n';
    }
}

void write_radargram_pgm(const Radargram& r, std::ostream& out) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& row : r.amplitudes)
        for (double v : row) {
            if (first) { lo = hi = v; first = false; }
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    const double span = hi > lo ? hi - lo : 1.0;
    out << "P2\n";
    out << "# min=" << fmt("%.9g", lo) << " max=" << fmt("%.9g", hi) << '\n';
    out << r.time_axis.size() << ' ' << r.amplitudes.size() << "\n255\n";
    for (const auto& row : r.amplitudes) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            const int value = static_cast<int>(std::lround((row[j] - lo) / span * 255.0));
            out << value << (j + 1 == row.size() ? '\n' : ' ');
        }
    }
}

void write_detections_csv(const std::vector<Detection>& detections, std::ostream& out) {
    out << "position_mm,delay_ns,depth_mm,amplitude,snr_db\n";
    for (const Detection& d : detections) {
        out << fmt("%.6f", d.lateral_position * 1e3) << ',' << fmt("%.9f", d.echo_delay * 1e9)
            << ',' << fmt("%.6f", d.estimated_depth * 1e3) << ','
            << fmt("%.9g", d.peak_amplitude) << ',' << fmt("%.3f", d.snr_db) << '\n';
    }
}

void write_run_meta(const std::vector<std::pair<std::string, std::string>>& entries,
                    std::ostream& out) {
    for (const auto& [key, value] : entries) out << key << " = " << value << '\n';
}

} // namespace ltir
