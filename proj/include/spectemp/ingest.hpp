#pragma once

// Windowed-aggregation ingestion: turns a long-format event log
// (node, timestamp, value) into per-process input/output signal matrices and
// sample covariance pairs. Timestamps are integer hours; a day is 24 hours and
// day-of-week cycles with day 0 = weekday index 0.

#include <string>
#include <vector>

#include "spectemp/diffusion.hpp"
#include "spectemp/linalg.hpp"

namespace spectemp {

struct TimeWindow {
  int start_hour = 0;  // inclusive, 0..23
  int end_hour = 0;    // exclusive, 1..24
};

struct ProcessSpec {
  std::string label;
  std::vector<int> days_of_week;  // 0..6; empty means all days
  TimeWindow input;
  TimeWindow output;
};

struct ProcessSignals {
  std::string label;
  Mat x;  // n_nodes x n_days aggregated input signals
  Mat y;  // n_nodes x n_days aggregated output signals
  std::vector<long> days;
};

struct IngestResult {
  std::vector<ProcessSignals> signals;
  std::vector<CovariancePair> pairs;  // one per process, same order
};

// Parses "node,timestamp,value" CSV (header row optional) and aggregates by
// summing values per (node, day, window). A day enters a process when it
// matches the day-of-week mask and at least one event fell in either window.
IngestResult ingest_signals(const std::string& csv_path, const std::vector<ProcessSpec>& processes,
                            int n_nodes);

std::vector<ProcessSpec> load_grouping_spec(const std::string& json_path);
void save_grouping_spec(const std::string& json_path, const std::vector<ProcessSpec>& processes);

}  // namespace spectemp
