// loscap: LOS capacity-scaling experiment runner.
//
//   loscap scaling   --n 1024:1048576:x4 --beta 1.0 --h 3 --regime dense --out scaling.csv
//   loscap eq-decay  --d 1 --l 2 --lambda 2^-3:2^-12:x0.5 --trials 100000 --seed 7
//   loscap mimo-bound --n-nodes 32 --d 1 --l 2 --lambda 0.01 --instances 200 --seed 3
//
// Exit codes: 0 success, 1 acceptance-check failure, 2 usage error, 3 I/O error.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "loscap/sweep.hpp"
#include "loscap/version.hpp"

namespace {

using loscap::sweep::SweepSpec;

struct GridOpt {
  std::string raw;
};

void add_common(CLI::App* cmd, SweepSpec& spec) {
  cmd->add_option("--seed", spec.seed, "RNG seed");
  cmd->add_option("--jobs", spec.jobs, "max concurrent grid points (default: LOSCAP_JOBS or 1)");
  cmd->add_option("--out", spec.out, "output CSV path (default: stdout)");
  cmd->set_config("--config", "", "flat key = value config file; flags override file values");
}

// frees the short -h so experiments can use --h for the hierarchy depth
CLI::App* sub(CLI::App& app, const std::string& name, const std::string& desc) {
  auto* cmd = app.add_subcommand(name, desc);
  cmd->set_help_flag("--help", "print this help message and exit");
  return cmd;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("loscap ") + loscap::kVersion +
               " - LOS channel capacity-scaling simulations"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  SweepSpec spec;
  std::string lambda_raw, beta_raw, n_raw, regime_raw = "dense", n_list_raw;

  auto* scaling = sub(app, "scaling", "predicted throughput lower/upper bounds over (n, lambda)");
  scaling->add_option("--n", n_raw, "node-count grid, e.g. 1024:1048576:x4");
  scaling->add_option("--beta", beta_raw, "lambda = n^-beta grid");
  scaling->add_option("--lambda", lambda_raw, "wavelength grid (alternative to --beta)");
  scaling->add_option("--h", spec.h, "hierarchy levels");
  scaling->add_option("--regime", regime_raw, "dense | extended");
  scaling->add_option("--alpha", spec.alpha, "path-loss exponent");
  add_common(scaling, spec);

  auto* eq = sub(app, "eq-decay", "Monte Carlo E[Q_1212] decay series over lambda");
  eq->add_option("--d", spec.d, "cluster side");
  eq->add_option("--l", spec.l, "center distance");
  eq->add_option("--lambda", lambda_raw, "wavelength grid");
  eq->add_option("--alpha", spec.alpha, "path-loss exponent");
  eq->add_option("--trials", spec.trials, "Monte Carlo trials per point");
  add_common(eq, spec);

  auto* lln = sub(app, "lln", "four-index sample-mean convergence vs Monte Carlo");
  lln->add_option("--d", spec.d, "cluster side");
  lln->add_option("--l", spec.l, "center distance");
  lln->add_option("--lambda", lambda_raw, "wavelength");
  lln->add_option("--alpha", spec.alpha, "path-loss exponent");
  lln->add_option("--n-list", n_list_raw, "comma list of cluster sizes, e.g. 16,32,64,128");
  lln->add_option("--seeds", spec.seeds_count, "placements per size");
  lln->add_option("--trials", spec.trials, "Monte Carlo trials for the reference estimate");
  add_common(lln, spec);

  auto* mimo = sub(app, "mimo-bound", "mutual information vs the explicit capacity lower bound");
  mimo->add_option("--n-nodes", spec.n_nodes, "nodes per cluster");
  mimo->add_option("--d", spec.d, "cluster side");
  mimo->add_option("--l", spec.l, "center distance");
  mimo->add_option("--lambda", lambda_raw, "wavelength (grid cycles per instance)");
  mimo->add_option("--alpha", spec.alpha, "path-loss exponent");
  mimo->add_option("--instances", spec.instances, "random instances");
  mimo->add_option("--sigma", spec.sigma_kind, "none | interference | random | mixed");
  add_common(mimo, spec);

  auto* proto = sub(app, "protocol", "three-phase slot accounting per hierarchy level");
  proto->add_option("--n", n_raw, "network size grid");
  proto->add_option("--lambda", lambda_raw, "wavelength grid");
  proto->add_option("--h", spec.h, "hierarchy levels");
  proto->add_option("--q", spec.q, "quantization rate");
  add_common(proto, spec);

  auto* l7 = sub(app, "lemma7", "periodic-integral bound checker on random instances");
  l7->add_option("--instances", spec.instances, "random instances");
  add_common(l7, spec);

  auto* l8 = sub(app, "lemma8", "corner angle lower bound on random Gamma2 geometries");
  l8->add_option("--d", spec.d, "cluster side");
  l8->add_option("--l", spec.l, "center distance");
  l8->add_option("--instances", spec.instances, "random geometries");
  add_common(l8, spec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return loscap::sweep::kExitUsage;
  }

  try {
    using loscap::sweep::Kind;
    if (scaling->parsed()) spec.kind = Kind::Scaling;
    else if (eq->parsed()) spec.kind = Kind::EqDecay;
    else if (lln->parsed()) spec.kind = Kind::Lln;
    else if (mimo->parsed()) spec.kind = Kind::MimoBound;
    else if (proto->parsed()) spec.kind = Kind::Protocol;
    else if (l7->parsed()) spec.kind = Kind::Lemma7;
    else if (l8->parsed()) spec.kind = Kind::Lemma8;

    if (!lambda_raw.empty()) spec.lambda_grid = loscap::sweep::parse_grid(lambda_raw);
    if (!beta_raw.empty()) spec.beta_grid = loscap::sweep::parse_grid(beta_raw);
    if (!n_raw.empty()) spec.n_grid = loscap::sweep::parse_grid(n_raw);
    if (regime_raw == "dense") spec.regime = loscap::Regime::Dense;
    else if (regime_raw == "extended") spec.regime = loscap::Regime::Extended;
    else throw loscap::sweep::UsageError("--regime must be dense or extended");
    if (!n_list_raw.empty()) {
      spec.n_list.clear();
      std::size_t pos = 0;
      while (pos < n_list_raw.size()) {
        auto comma = n_list_raw.find(',', pos);
        if (comma == std::string::npos) comma = n_list_raw.size();
        spec.n_list.push_back(static_cast<std::size_t>(
            loscap::sweep::parse_number(n_list_raw.substr(pos, comma - pos))));
        pos = comma + 1;
      }
    }
    return loscap::sweep::run(spec);
  } catch (const loscap::sweep::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return loscap::sweep::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return loscap::sweep::kExitUsage;
  }
}
