// cmremoval: theory and simulation of centrality-based removal on configuration models.
//
//   cmremoval theory job.json
//   cmremoval --seed 7 --threads 4 simulate experiment.json
//   cmremoval pagerank-kill --c 0.85 --radius 2 --threshold 0.3 graph.json

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "cmremoval/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Centrality-based vertex removal on configuration models"};
  app.require_subcommand(1);
  cmr::cli::GlobalOptions opts;
  app.add_option("--seed", opts.seed, "Seed used when the job gives none")->capture_default_str();
  app.add_option("--threads", opts.threads, "Worker threads for replicas")->check(CLI::PositiveNumber);
  app.add_option("--out", opts.out, "Output file (default: stdout)");

  std::string job_path;
  auto with_job = [&](CLI::App* sub) {
    sub->add_option("job", job_path, "JSON job file")->required()->check(CLI::ExistingFile);
    return sub;
  };

  auto* theory = with_job(app.add_subcommand("theory", "Giant fractions, bounds and derivatives"));
  auto* critical = with_job(app.add_subcommand("critical-alpha", "Critical removal fraction of a mode"));
  auto* simulate = with_job(app.add_subcommand("simulate", "Run an experiment spec"));
  auto* compare = with_job(app.add_subcommand("compare", "Compare removals of equal fraction"));
  auto* decompose = with_job(app.add_subcommand("decompose", "Epsilon-transform chain between two sequences"));

  double c = 0.85, threshold = 1.0;
  int radius = 2;
  std::size_t consistency = 0;
  auto* pagerank = with_job(app.add_subcommand("pagerank-kill", "Kill vertices by finite-radius PageRank"));
  pagerank->add_option("--c", c, "Damping factor")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  pagerank->add_option("--radius", radius, "Number of PageRank steps N")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  pagerank->add_option("--threshold", threshold, "Kill vertices scoring above this")->required();
  pagerank->add_option("--consistency-sample", consistency, "Vertices sampled for the locality check (0: skip)");

  auto* local = with_job(app.add_subcommand("local-limit", "Branching-process estimates for a threshold kill"));

  std::string dump;
  auto* comps = with_job(app.add_subcommand("components", "Component summary of one sampled graph"));
  comps->add_option("--dump", dump, "Write the graph in dump format");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto job = cmr::cli::load_json(job_path);
    if (*theory) return cmr::cli::theory(job, opts);
    if (*critical) return cmr::cli::critical(job, opts);
    if (*simulate) return cmr::cli::simulate(job, opts);
    if (*compare) return cmr::cli::compare(job, opts);
    if (*decompose) return cmr::cli::decompose(job, opts);
    if (*pagerank) return cmr::cli::pagerank_kill(job, opts, c, radius, threshold, consistency);
    if (*local) return cmr::cli::local_limit(job, opts);
    if (*comps) return cmr::cli::components_cmd(job, opts, dump);
  } catch (const cmr::OrderingError& e) {
    std::cerr << "error: " << e.what() << " (first violating tail index " << e.tail_index << ")\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed job: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
