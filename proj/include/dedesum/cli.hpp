#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dedesum::cli {

/// Everything a run needs; the seed fully determines all randomized
/// suites, and jobs never changes results (only wall time).
struct RunConfig {
  std::string command;

  std::string chi1, chi2;  // character labels ("q.n" or "q:[e,...]")
  std::int64_t q = 0;      // chars

  std::int64_t a = 0, c = 0;  // eval by column
  bool have_ac = false;
  std::string matrix;  // eval by matrix "a,b,c,d"

  std::int64_t q1_lo = 0, q1_hi = 0, q2_lo = 0, q2_hi = 0;
  std::int64_t max_product = 0;
  bool quadratic_only = false, coprime_only = false, odd_only = false;

  std::vector<std::string> suites;
  std::int64_t samples = 50;

  std::string mode = "exact";       // image/scan
  std::int64_t image_samples = 200;  // sampled mode budget
  std::int64_t max_c = 0;

  std::uint64_t seed = 0;
  int jobs = 1;
  bool json = false, csv = false;
  bool paranoid = false;
  bool timings = false;
  bool include_generators = false;  // image: embed the Schreier list in JSON
  std::string formula = "floor";

  std::string cache_path;  // empty: DEDESUM_CACHE env or default
  bool no_cache = false;
};

// Exit codes: 0 success, 1 verification/conjecture-check failure,
// 2 usage or input error.
int cmd_chars(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_image(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_table(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_scan(const RunConfig& cfg, std::ostream& out, std::ostream& err);

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses "A..B" or "A" into an inclusive range.
std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text);

}  // namespace dedesum::cli
