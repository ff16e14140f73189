#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace latentprobe {

// One published method row: geometry diagnostics, 16-bit hash bucket
// statistics, and retrieval metrics (x100, as printed) per index kind.
struct FixtureMethod {
  std::string name;
  std::optional<double> anisotropy;
  std::optional<double> skewness;
  std::optional<double> max_hub;
  std::optional<double> unique_buckets;
  std::optional<double> entropy_bits;
  std::optional<double> max_bucket_pct;
  // key "<index>_<metric>", e.g. "lsh_p_at_10"; value (mean, std) x100.
  std::map<std::string, std::pair<double, double>> retrieval;
};

struct Fixture {
  int version = 0;
  std::map<std::string, std::vector<FixtureMethod>> datasets;
};

Fixture parse_fixture(const std::string& json_text);
Fixture load_fixture_file(const std::string& path);

// The copy compiled into the binary.
Fixture builtin_fixture();
const char* builtin_fixture_json();

// Aligned column extraction across a dataset's methods; missing values raise
// an input error naming the method.
std::vector<double> fixture_column(const std::vector<FixtureMethod>& methods,
                                   const std::string& column);

}  // namespace latentprobe
