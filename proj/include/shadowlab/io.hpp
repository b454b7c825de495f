#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "shadowlab/shadows.hpp"

namespace shadowlab {

// Snapshot persistence: one JSON object per line,
// {protocol, seed, counter, descriptor, outcome}.
std::string snapshots_to_jsonl(const std::string& protocol_id, std::uint64_t seed,
                               const std::vector<Snapshot>& snaps);
std::vector<Snapshot> snapshots_from_jsonl(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Flat key = value configuration (TOML-compatible subset: comments with '#',
// bare keys, unquoted scalars or quoted strings).
std::map<std::string, std::string> parse_flat_config(const std::string& text);

struct SweepRow {
  std::string protocol;
  std::string observable;
  int n = 0;
  long long n_snapshots = 0;
  double mean = 0.0;
  double empirical_variance = 0.0;
  double bound_l2 = 0.0;
  double bound_inf = 0.0;
  std::optional<double> exact;
  double runtime_seconds = 0.0;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

// Standalone SVG log-scale line plot of variance vs n, one polyline per
// (protocol, observable) series.
std::string sweep_svg(const std::vector<SweepRow>& rows, const std::string& title);

std::string format_double(double v);

}  // namespace shadowlab
