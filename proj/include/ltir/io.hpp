#pragma once

#include "ltir/dsp.hpp"
#include "ltir/synth.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ltir {

// time_ns,volts rows.
void write_waveform_csv(const Waveform& w, std::ostream& out);

// Header row: position_mm followed by the time axis in ns; one row per position.
void write_radargram_csv(const Radargram& r, std::ostream& out);

// 8-bit P2 (text) PGM, amplitudes mapped linearly to 0..255 with the
// min/max stated in a comment line. Rows = positions, columns = time.
void write_radargram_pgm(const Radargram& r, std::ostream& out);

// position_mm,delay_ns,depth_mm,amplitude,snr_db rows.
void write_detections_csv(const std::vector<Detection>& detections, std::ostream& out);

// Key/value record of every resolved parameter of a run.
void write_run_meta(const std::vector<std::pair<std::string, std::string>>& entries,
                    std::ostream& out);

} // namespace ltir
