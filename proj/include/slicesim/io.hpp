#pragma once

#include <string>
#include <vector>

#include "slicesim/config.hpp"
#include "slicesim/harness.hpp"

namespace slicesim {

// Gathers every record from every cell in run order.
std::vector<EpisodeRecord> collect_records(const ExperimentResult& result);

// Fixed column order, fixed 6-decimal formatting: identical runs produce
// byte-identical files. Wall-clock numbers are kept out of this file on
// purpose; they go to the timings sidecar. The leading comment line ties the
// file back to the exact configuration that produced it.
void write_episodes_csv(const std::string& path, const RunConfig& cfg,
                        const std::vector<EpisodeRecord>& records);

void write_timings_csv(const std::string& path, const RunConfig& cfg,
                       const ExperimentResult& result);

// Per-cell summaries, advantage table and timing rows. Deterministic for a
// fixed (config, seed) except for the measured timing experiment rows.
void write_summary_json(const std::string& path, const RunConfig& cfg,
                        const ExperimentResult& result);

// Provenance: config hash, seed, per-cell derived seeds, tool versions.
void write_run_meta(const std::string& path, const RunConfig& cfg,
                    const ExperimentResult& result);

std::string default_out_dir(const std::string& experiment);

// Creates the directory (and parents) if needed and writes the full output
// set for one experiment run.
void write_outputs(const std::string& dir, const RunConfig& cfg,
                   const ExperimentResult& result);

}  // namespace slicesim
