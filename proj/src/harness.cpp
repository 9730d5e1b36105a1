#include "cdsc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "cdsc/rng.hpp"

namespace cdsc {

namespace {

bool run_one_trial(const BayesNet& model, const ExperimentSpec& spec, double m,
                   std::uint64_t seed) {
  TesterConfig config = spec.tester;
  config.rng_seed = seed;
  auto rows = std::make_shared<GenerativeSource>(model);
  FiniteSampleSource source(rows, config, m);
  try {
    const DiscoveryResult res = spec.algorithm == Algorithm::Ic
                                    ? run_ic(source)
                                    : run_pc(source, spec.max_cond);
    return recovery_success(res.pattern, model.dag);
  } catch (const RecoveryFailed&) {
    return false;
  }
}

}  // namespace

int resolve_workers(int requested) {
  int w = requested;
  if (w <= 0) {
    w = static_cast<int>(std::thread::hardware_concurrency());
    if (w <= 0) w = 1;
  }
  if (const char* env = std::getenv("CDSC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) w = std::min(w, cap);
  }
  return std::max(1, w);
}

ErrorCurve error_rate_experiment(const ExperimentSpec& spec) {
  validate_bayesnet(spec.model);
  validate_config(spec.tester);
  if (spec.trials <= 0) throw InvalidParameter("trials must be positive");
  if (spec.sample_sizes.empty()) throw InvalidParameter("sample grid is empty");
  for (double m : spec.sample_sizes)
    if (!(m > 0.0)) throw InvalidParameter("sample sizes must be positive");

  const std::size_t jobs = spec.sample_sizes.size() * static_cast<std::size_t>(spec.trials);
  std::vector<unsigned char> failed(jobs, 0);

  const int workers = std::min<int>(resolve_workers(spec.workers),
                                    static_cast<int>(jobs));
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t job = cursor.fetch_add(1); job < jobs; job = cursor.fetch_add(1)) {
      const std::size_t mi = job / spec.trials;
      const std::size_t trial = job % spec.trials;
      const std::uint64_t seed = mix_seed({spec.base_seed, mi, trial});
      failed[job] = run_one_trial(spec.model, spec, spec.sample_sizes[mi], seed) ? 0 : 1;
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ErrorCurve curve;
  for (std::size_t mi = 0; mi < spec.sample_sizes.size(); ++mi) {
    ErrorPoint p;
    p.m = spec.sample_sizes[mi];
    p.trials = spec.trials;
    for (int t = 0; t < spec.trials; ++t)
      p.failures += failed[mi * spec.trials + t];
    p.error_rate = static_cast<double>(p.failures) / spec.trials;
    p.ci_halfwidth = 1.96 * std::sqrt(p.error_rate * (1.0 - p.error_rate) / spec.trials);
    curve.points.push_back(p);
  }
  return curve;
}

double planner_q1(int n, int l, double epsilon, Algorithm algorithm, int r) {
  TesterConfig config;
  config.epsilon = epsilon;
  const double probe_alpha = 0.5;
  double m;
  if (algorithm == Algorithm::Ic) {
    m = budget_ic(std::vector<int>(n, l), probe_alpha, epsilon, config).m_expected;
  } else {
    m = bound_sparsity(n, l, probe_alpha, epsilon, r, config);
  }
  return probe_alpha * m;  // alpha * m is invariant in alpha
}

std::vector<double> theoretical_curve(int n, int l, double epsilon, double c_prime,
                                      const std::vector<double>& sample_grid,
                                      Algorithm algorithm, int r) {
  if (!(c_prime > 0.0)) throw InvalidParameter("c_prime must be positive");
  const double q = c_prime * planner_q1(n, l, epsilon, algorithm, r);
  std::vector<double> alphas;
  alphas.reserve(sample_grid.size());
  for (double m : sample_grid) {
    if (!(m > 0.0)) throw InvalidParameter("sample sizes must be positive");
    alphas.push_back(std::min(1.0, q / m));
  }
  return alphas;
}

void attach_theoretical(ErrorCurve& curve, int n, int l, double epsilon,
                        double c_prime, Algorithm algorithm, int r) {
  std::vector<double> grid;
  for (const auto& p : curve.points) grid.push_back(p.m);
  const auto alphas = theoretical_curve(n, l, epsilon, c_prime, grid, algorithm, r);
  for (std::size_t k = 0; k < curve.points.size(); ++k)
    curve.points[k].theoretical_alpha = alphas[k];
}

std::vector<ComparisonRow> budget_comparison(int n_min, int n_max, int l, double alpha,
                                             double epsilon, int r,
                                             const TesterConfig& config) {
  if (n_min < 3 || n_max < n_min)
    throw InvalidParameter("need 3 <= n_min <= n_max");
  std::vector<ComparisonRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    ComparisonRow row;
    row.n = n;
    row.m_ic = bound_uniform(n, l, alpha, epsilon, config);
    row.m_pc = bound_sparsity(n, l, alpha, epsilon, std::min(r, n - 2), config);
    row.ratio = row.m_ic / row.m_pc;
    rows.push_back(row);
  }
  return rows;
}

double calibrate_c_prime(const ErrorCurve& curve, double q1) {
  if (curve.points.empty()) throw InvalidParameter("empty error curve");
  if (!(q1 > 0.0)) throw InvalidParameter("q1 must be positive");

  const auto& pts = curve.points;
  // Largest grid point still at or above one-half.
  int lo = -1;
  for (int k = 0; k < static_cast<int>(pts.size()); ++k)
    if (pts[k].error_rate >= 0.5) lo = k;

  double m_star;
  if (lo < 0) {
    m_star = pts.front().m;  // curve starts below 0.5: crossing is off-grid left
  } else if (lo + 1 >= static_cast<int>(pts.size())) {
    m_star = pts.back().m;   // never drops below 0.5 on the grid
  } else {
    const double e0 = pts[lo].error_rate, e1 = pts[lo + 1].error_rate;
    const double t = (e0 - 0.5) / std::max(e0 - e1, 1e-12);
    m_star = std::exp(std::log(pts[lo].m) +
                      t * (std::log(pts[lo + 1].m) - std::log(pts[lo].m)));
  }
  // alpha(m*) = c' q1 / m* = 0.5
  return 0.5 * m_star / q1;
}

double weakest_dependent_tv(const BayesNet& model) {
  const JointTable joint = joint_from_net(model);
  const int n = model.dag.size();
  double weakest = 1.0;
  bool any = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<int> pool;
      for (int k = 0; k < n; ++k)
        if (k != i && k != j) pool.push_back(k);
      const std::size_t subsets = std::size_t{1} << pool.size();
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<int> b;
        for (std::size_t t = 0; t < pool.size(); ++t)
          if (mask & (std::size_t{1} << t)) b.push_back(pool[t]);
        if (exact_ci(joint, i, j, b)) continue;
        weakest = std::min(weakest, tv_to_ci_surrogate(joint, i, j, b));
        any = true;
      }
    }
  if (!any) throw InvalidParameter("model has no dependent triple");
  return weakest;
}

}  // namespace cdsc
