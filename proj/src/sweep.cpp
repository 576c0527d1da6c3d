#include "loscap/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "loscap/mimo.hpp"
#include "loscap/planner.hpp"
#include "loscap/protocol.hpp"
#include "loscap/rng.hpp"
#include "loscap/spectral.hpp"
#include "loscap/version.hpp"

namespace loscap::sweep {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_u64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
  return buf;
}

int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  if (const char* env = std::getenv("LOSCAP_JOBS")) {
    const int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; results keep index
/// order no matter which worker finishes first.
std::vector<std::string> parallel_rows(std::size_t count, int jobs,
                                       const std::function<std::string(std::size_t)>& fn) {
  std::vector<std::string> rows(count);
  const int workers = std::min<std::size_t>(std::max(1, jobs), std::max<std::size_t>(1, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) rows[i] = fn(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) rows[i] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

std::string grid_echo(const GridSpec& g) { return g.raw.empty() ? std::string("-") : g.raw; }

void header_common(std::ostringstream& os, const SweepSpec& spec) {
  os << "# loscap " << kVersion << "\n";
  os << "# spec: kind=" << kind_name(spec.kind) << " seed=" << spec.seed
     << " trials=" << spec.trials << " d=" << fmt17(spec.d) << " l=" << fmt17(spec.l)
     << " alpha=" << fmt17(spec.alpha) << " h=" << spec.h << " q=" << spec.q
     << " regime=" << (spec.regime == Regime::Dense ? "dense" : "extended")
     << " lambda=" << grid_echo(spec.lambda_grid) << " beta=" << grid_echo(spec.beta_grid)
     << " n=" << grid_echo(spec.n_grid) << " n-nodes=" << spec.n_nodes
     << " instances=" << spec.instances << " sigma=" << spec.sigma_kind << " n-list=";
  for (std::size_t i = 0; i < spec.n_list.size(); ++i) os << (i ? "," : "") << spec.n_list[i];
  os << " seeds=" << spec.seeds_count << "\n";
}

GridSpec default_grid(const GridSpec& g, const std::string& fallback) {
  return g.values.empty() ? parse_grid(fallback) : g;
}

// ---- experiment renderers ----------------------------------------------

RenderResult render_scaling(const SweepSpec& spec) {
  const GridSpec ns = default_grid(spec.n_grid, "1024:1048576:x4");
  GridSpec betas = spec.beta_grid;
  GridSpec lambdas = spec.lambda_grid;
  if (betas.values.empty() && lambdas.values.empty()) betas = parse_grid("1.0");
  const std::size_t inner = betas.values.empty() ? lambdas.values.size() : betas.values.size();
  const std::size_t count = ns.values.size() * inner;

  auto row = [&](std::size_t idx) {
    const std::size_t ni = idx / inner, li = idx % inner;
    const auto n = static_cast<std::size_t>(std::llround(ns.values[ni]));
    const double lambda = betas.values.empty()
                              ? lambdas.values[li]
                              : std::pow(static_cast<double>(n), -betas.values[li]);
    const ScalingPrediction p = predicted_throughput(n, lambda, spec.h, spec.regime, spec.alpha);
    std::ostringstream os;
    os << n << ',' << fmt17(lambda) << ',' << p.regime_index << ',' << fmt17(p.delta) << ','
       << fmt17(p.tau) << ',' << fmt17(p.lower_bound) << ',' << fmt17(p.upper_bound) << ','
       << (p.dof_limited ? 1 : 0);
    return os.str();
  };
  const auto rows = parallel_rows(count, resolve_jobs(spec.jobs), row);

  std::ostringstream os;
  header_common(os, spec);
  os << "n,lambda,b,delta,tau,lower,upper,dof_limited\n";
  for (const auto& r : rows) os << r << "\n";
  return {os.str(), false};
}

RenderResult render_eq_decay(const SweepSpec& spec) {
  const GridSpec lambdas = default_grid(spec.lambda_grid, "2^-3:2^-10:x0.5");
  const Rng root(spec.seed);
  auto row = [&](std::size_t i) {
    const DecayPoint p = estimate_EQ(spec.d, spec.l, lambdas.values[i], spec.alpha, spec.trials,
                                     root.fork(i).seed());
    std::ostringstream os;
    os << fmt17(p.lambda) << ',' << fmt17(p.M) << ',' << fmt17(p.mean) << ','
       << fmt17(p.half_width) << ',' << fmt_u64(p.trials);
    return os.str();
  };
  const auto rows = parallel_rows(lambdas.values.size(), resolve_jobs(spec.jobs), row);
  std::ostringstream os;
  header_common(os, spec);
  os << "lambda,m_dof,eq_mean,ci_half,trials\n";
  for (const auto& r : rows) os << r << "\n";
  return {os.str(), false};
}

RenderResult render_lln(const SweepSpec& spec) {
  const GridSpec lambdas = default_grid(spec.lambda_grid, "2^-3");
  const double lambda = lambdas.values.front();
  const LlnReport rep = lln_convergence_check(spec.n_list, spec.d, spec.l, lambda, spec.alpha,
                                              spec.seeds_count, spec.seed, spec.trials);
  std::ostringstream os;
  header_common(os, spec);
  os << "n_nodes,sample_mean,sd_over_seeds,mean_abs_succ_diff,mc_mean,mc_ci_half\n";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    os << rep.rows[i].N << ',' << fmt17(rep.rows[i].mean) << ',' << fmt17(rep.rows[i].sd) << ',';
    if (i > 0) os << fmt17(rep.mean_abs_diff[i - 1]);
    os << ',' << fmt17(rep.mc.mean) << ',' << fmt17(rep.mc.half_width) << "\n";
  }
  return {os.str(), false};
}

struct MimoInstanceResult {
  std::string row;
  bool ok = true;
};

RenderResult render_mimo_bound(const SweepSpec& spec) {
  const GridSpec lambdas = default_grid(spec.lambda_grid, "0.01");
  const Rng root(spec.seed);
  std::vector<MimoInstanceResult> results(spec.instances);
  auto row = [&](std::size_t i) {
    Rng rng = root.fork(i);
    const double lambda = lambdas.values[i % lambdas.values.size()];
    const auto pair = ClusterPair::sample(spec.n_nodes, spec.d, spec.l, rng.fork(1).seed());
    NetworkConfig cfg;
    cfg.n = 2 * spec.n_nodes;
    cfg.lambda = lambda;
    cfg.alpha = spec.alpha;
    const ChannelMatrix H = channel_matrix(pair.tx, pair.rx, cfg);
    const MimoGeometry geom{spec.n_nodes, spec.d, spec.l, lambda, cfg.G, cfg.P, spec.alpha};

    std::string kind = spec.sigma_kind;
    if (kind == "mixed") kind = (i % 3 == 0) ? "none" : (i % 3 == 1) ? "interference" : "random";
    InterferenceModel sigma = InterferenceModel::none(spec.n_nodes);
    if (kind == "interference") {
      const ClusterGrid grid{9, 9, 3.0 * spec.l};
      // receive nodes live inside the center cluster of the 9x9 grid
      std::vector<Point> rx(pair.rx);
      const double ox = 4.0 * grid.cell + 0.5 * grid.cell, oy = 4.0 * grid.cell + 0.5 * grid.cell;
      for (auto& p : rx) { p.x += ox - spec.l; p.y += oy; }
      sigma = interference_covariance(rx, GridCoord{4, 4}, grid, spec.n_nodes, cfg.P, spec.l, cfg,
                                      rng.fork(2).seed());
    } else if (kind == "random") {
      Rng g = rng.fork(3);
      Eigen::MatrixXcd A(spec.n_nodes, spec.n_nodes);
      for (Eigen::Index r = 0; r < A.rows(); ++r)
        for (Eigen::Index c = 0; c < A.cols(); ++c) A(r, c) = std::complex<double>(g.normal(), g.normal());
      Eigen::MatrixXcd S = A * A.adjoint();
      const double target = cfg.P * (H.entries * H.entries.adjoint()).trace().real() *
                            g.uniform(0.01, 10.0) / static_cast<double>(spec.n_nodes);
      S *= target / S.trace().real();
      sigma = InterferenceModel::from_sigma(std::move(S), spec.l, cfg.G, cfg.P, spec.alpha);
    }

    const double mi = mutual_information_gaussian(H.entries, sigma.sigma, cfg.P);
    const MimoBound best = best_theorem2_bound(H, sigma, geom);
    const bool ok = mi + 1e-9 >= best.value;
    std::ostringstream os;
    os << i << ',' << kind << ',' << fmt17(lambda) << ',' << fmt17(mi) << ',' << fmt17(best.value)
       << ',' << fmt17(best.delta) << ',' << fmt17(best.M) << ',' << (ok ? 1 : 0);
    results[i] = {os.str(), ok};
    return os.str();
  };
  parallel_rows(spec.instances, resolve_jobs(spec.jobs), row);

  bool violation = false;
  std::ostringstream os;
  header_common(os, spec);
  os << "instance,sigma,lambda,mi_bits,bound_bits,delta_star,m_dof,ok\n";
  for (const auto& r : results) {
    os << r.row << "\n";
    if (!r.ok) violation = true;
  }
  return {os.str(), violation};
}

RenderResult render_protocol(const SweepSpec& spec) {
  const GridSpec ns = default_grid(spec.n_grid, "65536");
  const GridSpec lambdas = default_grid(spec.lambda_grid, "2^-10");
  std::ostringstream os;
  header_common(os, spec);
  os << "n,lambda,level,n_prev,n_cur,m,r_k,phase1,phase2,phase3,throughput,recursion,"
        "ceiled_total,ceiled_throughput\n";
  for (double nv : ns.values) {
    const auto n = static_cast<std::size_t>(std::llround(nv));
    for (double lambda : lambdas.values) {
      const HierarchyPlan plan = optimal_cluster_sizes(n, lambda, spec.h, spec.q);
      for (int k = 1; k <= spec.h; ++k) {
        const LevelSim real = simulate_level(k, plan, spec.q, false);
        const LevelSim ceiled = simulate_level(k, plan, spec.q, true);
        os << n << ',' << fmt17(lambda) << ',' << k << ','
           << plan.n_seq[static_cast<std::size_t>(k - 1)] << ','
           << plan.n_seq[static_cast<std::size_t>(k)] << ','
           << plan.m_seq[static_cast<std::size_t>(k - 1)] << ','
           << fmt17(plan.rates[static_cast<std::size_t>(k - 1)]) << ','
           << fmt17(real.schedule.phase1) << ',' << fmt17(real.schedule.phase2) << ','
           << fmt17(real.schedule.phase3) << ',' << fmt17(real.throughput) << ','
           << fmt17(plan.throughputs[static_cast<std::size_t>(k)]) << ','
           << fmt17(ceiled.schedule.total()) << ',' << fmt17(ceiled.throughput) << "\n";
      }
    }
  }
  return {os.str(), false};
}

// Random admissible Lemma-7 instance: odd-harmonic trig polynomial g
// (so g(x + p/2) = -g(x)), piecewise-monotone nonnegative h.
struct Lemma7Instance {
  PeriodicFn g;
  PiecewiseMonotoneFn h;
  double c1 = 1.0, c2 = 0.0;
};

Lemma7Instance make_lemma7_instance(Rng rng) {
  Lemma7Instance inst;
  const double p = std::exp(rng.uniform(std::log(0.5), std::log(4.0)));
  const int harmonics = 1 + static_cast<int>(rng.below(3));
  std::vector<double> amp(static_cast<std::size_t>(harmonics));
  std::vector<double> pha(static_cast<std::size_t>(harmonics));
  double norm = 0.0;
  for (int j = 0; j < harmonics; ++j) {
    amp[static_cast<std::size_t>(j)] = rng.uniform(0.2, 1.0);
    pha[static_cast<std::size_t>(j)] = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
    norm += amp[static_cast<std::size_t>(j)];
  }
  inst.g.period = p;
  inst.g.g = [p, amp, pha, norm](double x) {
    double v = 0.0;
    for (std::size_t j = 0; j < amp.size(); ++j)
      v += amp[j] * std::sin(2.0 * 3.14159265358979323846 * (2.0 * static_cast<double>(j) + 1.0) * x / p + pha[j]);
    return v / norm;
  };

  const double a = rng.uniform(-5.0, 5.0);
  const double len = rng.uniform(0.5, 8.0);
  const int cells = 1 + static_cast<int>(rng.below(6));
  std::vector<double> part{a};
  for (int c = 0; c < cells - 1; ++c) part.push_back(a + len * rng.uniform(0.05, 0.95));
  part.push_back(a + len);
  std::sort(part.begin(), part.end());
  std::vector<double> y0(static_cast<std::size_t>(cells)), y1(static_cast<std::size_t>(cells)),
      pw(static_cast<std::size_t>(cells));
  for (int c = 0; c < cells; ++c) {
    y0[static_cast<std::size_t>(c)] = rng.uniform(0.0, 3.0);
    y1[static_cast<std::size_t>(c)] = rng.uniform(0.0, 3.0);
    const double powers[4] = {0.5, 1.0, 2.0, 3.0};
    pw[static_cast<std::size_t>(c)] = powers[rng.below(4)];
  }
  inst.h.partition = part;
  inst.h.h = [part, y0, y1, pw](double x) {
    std::size_t c = 0;
    while (c + 2 < part.size() && x > part[c + 1]) ++c;
    const double t = (x - part[c]) / (part[c + 1] - part[c]);
    return y0[c] + (y1[c] - y0[c]) * std::pow(std::clamp(t, 0.0, 1.0), pw[c]);
  };
  inst.c1 = (rng.below(2) ? 1.0 : -1.0) * std::exp(rng.uniform(std::log(0.5), std::log(25.0)));
  inst.c2 = rng.uniform(-10.0, 10.0);
  return inst;
}

RenderResult render_lemma7(const SweepSpec& spec) {
  const Rng root(spec.seed);
  std::vector<char> oks(spec.instances, 1);
  auto row = [&](std::size_t i) {
    const Lemma7Instance inst = make_lemma7_instance(root.fork(i));
    const IntegralBoundResult r = integral_bound_check(inst.g, inst.h, inst.c1, inst.c2);
    oks[i] = r.ok ? 1 : 0;
    std::ostringstream os;
    os << i << ',' << inst.h.partition.size() - 1 << ',' << fmt17(inst.c1) << ','
       << fmt17(inst.g.period) << ',' << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ','
       << fmt17(r.quad_tol) << ',' << (r.ok ? 1 : 0);
    return os.str();
  };
  const auto rows = parallel_rows(spec.instances, resolve_jobs(spec.jobs), row);
  bool violation = false;
  for (char ok : oks)
    if (!ok) violation = true;
  std::ostringstream os;
  header_common(os, spec);
  os << "instance,m,c1,period,lhs,rhs,quad_tol,ok\n";
  for (const auto& r : rows) os << r << "\n";
  return {os.str(), violation};
}

RenderResult render_lemma8(const SweepSpec& spec) {
  const Rng root(spec.seed);
  const ClusterPair frame = ClusterPair::sample(1, spec.d, spec.l, 0);
  std::vector<char> oks(spec.instances, 1);
  auto row = [&](std::size_t i) {
    Rng rng = root.fork(i);
    Point zu, zv;
    // rejection-sample a Gamma2 transmit pair
    for (;;) {
      zu = {rng.uniform(0.0, spec.d), rng.uniform(0.0, spec.d)};
      zv = {rng.uniform(0.0, spec.d), rng.uniform(0.0, spec.d)};
      if (zu.x == zv.x && zu.y == zv.y) continue;
      if (classify_region(zu, zv, frame) == Region::Gamma2) break;
    }
    const Point zs{spec.l + rng.uniform(0.0, spec.d), rng.uniform(0.0, spec.d)};
    const double phi = angle_phi(zu, zv, zs);
    const double phi_m = phi_corner_min(zu, zv, frame);
    const bool ok = std::abs(phi) >= phi_m - 1e-12;
    oks[i] = ok ? 1 : 0;
    std::ostringstream os;
    os << i << ',' << fmt17(phi) << ',' << fmt17(phi_m) << ',' << (ok ? 1 : 0);
    return os.str();
  };
  const auto rows = parallel_rows(spec.instances, resolve_jobs(spec.jobs), row);
  bool violation = false;
  for (char ok : oks)
    if (!ok) violation = true;
  std::ostringstream os;
  header_common(os, spec);
  os << "instance,phi,phi_m,ok\n";
  for (const auto& r : rows) os << r << "\n";
  return {os.str(), violation};
}

}  // namespace

double parse_number(const std::string& s) {
  const auto caret = s.find('^');
  try {
    std::size_t pos = 0;
    if (caret == std::string::npos) {
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw UsageError("trailing characters in number: " + s);
      return v;
    }
    const double base = std::stod(s.substr(0, caret), &pos);
    if (pos != caret) throw UsageError("bad power syntax: " + s);
    const double expo = std::stod(s.substr(caret + 1), &pos);
    if (pos != s.size() - caret - 1) throw UsageError("bad power syntax: " + s);
    return std::pow(base, expo);
  } catch (const std::invalid_argument&) {
    throw UsageError("not a number: " + s);
  } catch (const std::out_of_range&) {
    throw UsageError("number out of range: " + s);
  }
}

GridSpec parse_grid(const std::string& s) {
  GridSpec g;
  g.raw = s;
  const auto c1 = s.find(':');
  if (c1 == std::string::npos) {
    g.values.push_back(parse_number(s));
    return g;
  }
  const auto c2 = s.find(':', c1 + 1);
  if (c2 == std::string::npos) throw UsageError("grid needs start:stop:step, got: " + s);
  const double start = parse_number(s.substr(0, c1));
  const double stop = parse_number(s.substr(c1 + 1, c2 - c1 - 1));
  const std::string step = s.substr(c2 + 1);
  if (step.empty()) throw UsageError("empty grid step in: " + s);
  if (step[0] == 'x') {
    const double f = parse_number(step.substr(1));
    if (!(f > 0.0) || f == 1.0) throw UsageError("geometric factor must be positive and != 1: " + s);
    if ((stop > start && f < 1.0) || (stop < start && f > 1.0))
      throw UsageError("geometric grid never reaches stop: " + s);
    double v = start;
    const double lo = std::min(start, stop), hi = std::max(start, stop);
    while (v >= lo * (1.0 - 1e-9) && v <= hi * (1.0 + 1e-9)) {
      g.values.push_back(v);
      v *= f;
    }
  } else if (step[0] == '+') {
    const double d = parse_number(step.substr(1));
    if (d == 0.0) throw UsageError("arithmetic step must be nonzero: " + s);
    if ((stop - start) * d < 0.0) throw UsageError("arithmetic grid never reaches stop: " + s);
    const double span = std::abs(stop - start);
    for (double v = start; std::abs(v - start) <= span * (1.0 + 1e-9) + 1e-300; v += d)
      g.values.push_back(v);
  } else {
    throw UsageError("grid step must begin with 'x' or '+': " + s);
  }
  if (g.values.empty()) throw UsageError("grid is empty: " + s);
  return g;
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::MimoBound: return "mimo-bound";
    case Kind::EqDecay: return "eq-decay";
    case Kind::Lln: return "lln";
    case Kind::Scaling: return "scaling";
    case Kind::Protocol: return "protocol";
    case Kind::Lemma7: return "lemma7";
    case Kind::Lemma8: return "lemma8";
  }
  return "?";
}

Kind kind_from_name(const std::string& name) {
  if (name == "mimo-bound") return Kind::MimoBound;
  if (name == "eq-decay") return Kind::EqDecay;
  if (name == "lln") return Kind::Lln;
  if (name == "scaling") return Kind::Scaling;
  if (name == "protocol") return Kind::Protocol;
  if (name == "lemma7") return Kind::Lemma7;
  if (name == "lemma8") return Kind::Lemma8;
  throw UsageError("unknown experiment kind: " + name);
}

RenderResult render_csv(const SweepSpec& spec) {
  if (spec.trials < 1) throw UsageError("trials must be >= 1");
  switch (spec.kind) {
    case Kind::Scaling: return render_scaling(spec);
    case Kind::EqDecay: return render_eq_decay(spec);
    case Kind::Lln: return render_lln(spec);
    case Kind::MimoBound: return render_mimo_bound(spec);
    case Kind::Protocol: return render_protocol(spec);
    case Kind::Lemma7: return render_lemma7(spec);
    case Kind::Lemma8: return render_lemma8(spec);
  }
  throw UsageError("unknown experiment kind");
}

int run(const SweepSpec& spec) {
  RenderResult result;
  try {
    result = render_csv(spec);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (spec.out.empty()) {
    std::cout << result.csv;
  } else {
    std::ofstream out(spec.out, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "I/O error: cannot open " << spec.out << " for writing\n";
      return kExitIo;
    }
    out << result.csv;
    out.flush();
    if (!out) {
      std::cerr << "I/O error: short write to " << spec.out << "\n";
      return kExitIo;
    }
  }
  return result.violation ? kExitViolation : kExitOk;
}

}  // namespace loscap::sweep
