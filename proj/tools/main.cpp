#include <csignal>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "dedesum/cli.hpp"
#include "dedesum/errors.hpp"

namespace {

void on_interrupt(int) {
  // Cache records are flushed as they are appended, so nothing is lost.
  std::_Exit(130);
}

void add_common(CLI::App* sub, dedesum::cli::RunConfig& cfg) {
  sub->add_option("--seed", cfg.seed, "PRNG seed; fully determines randomized suites");
  sub->add_option("--jobs", cfg.jobs, "worker count (never changes results)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--json", cfg.json, "JSON output");
  sub->add_option("--cache", cfg.cache_path, "results cache path (JSON lines)");
  sub->add_flag("--no-cache", cfg.no_cache, "disable the results cache");
}

void add_pair_options(CLI::App* sub, dedesum::cli::RunConfig& cfg, std::string& q1r,
                      std::string& q2r) {
  sub->add_option("--chi1", cfg.chi1, "first character, 'q.n' (Conrey) or 'q:[e,...]'");
  sub->add_option("--chi2", cfg.chi2, "second character");
  sub->add_option("--q1", q1r, "conductor range A..B for chi1");
  sub->add_option("--q2", q2r, "conductor range A..B for chi2");
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, on_interrupt);

  CLI::App app{"newform Dedekind sums: exact evaluation, identity checks, image lattices"};
  app.require_subcommand(1);

  dedesum::cli::RunConfig cfg;
  std::string q1_range, q2_range, suites_arg;

  auto* chars = app.add_subcommand("chars", "list primitive characters mod q");
  chars->add_option("--q", cfg.q, "modulus")->required();
  add_common(chars, cfg);

  auto* eval = app.add_subcommand("eval", "evaluate S_{chi1,chi2}(a, c)");
  add_pair_options(eval, cfg, q1_range, q2_range);
  auto* aopt = eval->add_option("--a", cfg.a, "first column entry a");
  eval->add_option("--c", cfg.c, "lower-left entry c (multiple of q1*q2)")->needs(aopt);
  eval->add_option("--matrix", cfg.matrix, "matrix 'a,b,c,d' instead of --a/--c");
  eval->add_option("--formula", cfg.formula, "floor|bernoulli|fractional")
      ->check(CLI::IsMember({"floor", "bernoulli", "fractional"}));
  eval->add_flag("--paranoid", cfg.paranoid, "cross-check against the defining sum");
  add_common(eval, cfg);

  auto* verify = app.add_subcommand("verify", "run identity/theorem suites");
  add_pair_options(verify, cfg, q1_range, q2_range);
  verify->add_option("--suite", suites_arg, "comma-separated suite names");
  verify->add_option("--samples", cfg.samples, "samples per suite");
  verify->add_option("--max-product", cfg.max_product, "limit q1*q2 in range mode");
  verify->add_flag("--quadratic-only", cfg.quadratic_only, "restrict to quadratic pairs");
  verify->add_flag("--coprime-only", cfg.coprime_only, "restrict to coprime conductors");
  verify->add_flag("--odd-only", cfg.odd_only, "restrict to odd conductors");
  add_common(verify, cfg);

  auto* image = app.add_subcommand("image", "compute the image lattice S(Gamma_1(q1*q2))");
  add_pair_options(image, cfg, q1_range, q2_range);
  image->add_option("--mode", cfg.mode, "exact|sampled")
      ->check(CLI::IsMember({"exact", "sampled"}));
  image->add_option("--samples", cfg.image_samples, "sampled-mode budget");
  image->add_option("--max-c", cfg.max_c, "sampled mode: skip generators with c above this");
  image->add_flag("--gens", cfg.include_generators, "embed the Schreier generator list in JSON");
  image->add_flag("--timings", cfg.timings, "include timings in JSON output");
  add_common(image, cfg);

  auto* table = app.add_subcommand("table", "recompute the four reference image rows");
  table->add_flag("--timings", cfg.timings, "include timings in JSON output");
  add_common(table, cfg);

  auto* scan = app.add_subcommand("scan", "scan conductor ranges and test the conjectures");
  add_pair_options(scan, cfg, q1_range, q2_range);
  scan->add_option("--max-product", cfg.max_product, "limit q1*q2");
  scan->add_flag("--quadratic-only", cfg.quadratic_only, "quadratic pairs only");
  scan->add_flag("--coprime-only", cfg.coprime_only, "coprime conductors only");
  scan->add_flag("--odd-only", cfg.odd_only, "odd conductors only");
  scan->add_flag("--csv", cfg.csv, "CSV output");
  add_common(scan, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cfg.have_ac = aopt->count() > 0;
  try {
    if (!q1_range.empty()) std::tie(cfg.q1_lo, cfg.q1_hi) = dedesum::cli::parse_range(q1_range);
    if (!q2_range.empty()) std::tie(cfg.q2_lo, cfg.q2_hi) = dedesum::cli::parse_range(q2_range);
  } catch (const dedesum::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (!suites_arg.empty()) {
    std::istringstream in(suites_arg);
    std::string tok;
    while (std::getline(in, tok, ','))
      if (!tok.empty()) cfg.suites.push_back(tok);
  }

  for (CLI::App* sub : {chars, eval, verify, image, table, scan}) {
    if (sub->parsed()) {
      cfg.command = sub->get_name();
      break;
    }
  }
  return dedesum::cli::dispatch(cfg, std::cout, std::cerr);
}
