#pragma once

#include <string>

#include "mel.hpp"

namespace cghi::data {

// Loads one bearing run laid out as a directory of acc_*.csv files, each one
// snapshot of 2560 rows x 6 columns (hour, minute, second, microsecond,
// horizontal accel, vertical accel). Files are ordered by name and snapshot
// timestamps follow the 10 s recording cadence.
dsp::RawRun load_run_dir(const std::string& dir, const std::string& run_id, int condition,
                         double cadence_s = 10.0);

// Writes a run in the same directory layout (used by the synthetic
// generator so generated data flows through the standard loader).
void write_run_dir(const std::string& dir, const dsp::RawRun& run);

}  // namespace cghi::data
