#pragma once

// End-to-end order finding and factoring on the simulator, plus the four
// recorded device experiments.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "shorcert/cert.hpp"
#include "shorcert/noise.hpp"
#include "shorcert/numtheory.hpp"
#include "shorcert/qpe.hpp"
#include "shorcert/rng.hpp"
#include "shorcert/sim.hpp"

namespace shorcert {

struct ExperimentConfig {
  std::string name;
  u64 modulus = 15;
  std::optional<u64> base;  // random per attempt when absent
  unsigned phase_bits = 0;  // 0 selects 2 * ceil(log2 N)
  u64 shots = 2048;
  Backend backend = Backend::permutation;
  NoiseSpec noise;
  double alpha = 0.01;
  WindowMode mode = WindowMode::inclusive;
  u64 seed = 1;
  unsigned max_attempts = 20;
  u64 multiple_cap = 8;

  unsigned resolved_phase_bits() const {
    return phase_bits == 0 ? default_phase_bits(modulus) : phase_bits;
  }

  void validate() const {
    detail::require(modulus >= 3, ErrorKind::config, "N must be >= 3");
    detail::require(!is_prime(modulus), ErrorKind::config,
                    "N=" + std::to_string(modulus) + " is prime, nothing to factor");
    detail::require(shots >= 1, ErrorKind::config, "shots must be >= 1");
    detail::require(resolved_phase_bits() >= 1 && resolved_phase_bits() <= 24, ErrorKind::config,
                    "t must be in [1, 24]");
    detail::require(alpha > 0.0 && alpha < 1.0, ErrorKind::config, "alpha must lie in (0, 1)");
    detail::require(max_attempts >= 1, ErrorKind::config, "attempt cap must be >= 1");
    if (base)
      detail::require(*base > 1 && *base < modulus, ErrorKind::config,
                      "base a must satisfy 1 < a < N");
    noise.validate();
  }
};

/// Phase-register outcome distribution for (N, a, t) on the given backend,
/// with the noise model applied on top of the exact engine output.
inline std::vector<double> outcome_distribution(u64 modulus, u64 base, unsigned t, Backend backend,
                                                const NoiseSpec& noise) {
  const OrderFindingInstance inst{modulus, base, std::nullopt};
  const Circuit circuit = build_qpe_circuit(inst, t, backend);
  const StateVector sv = execute(circuit);
  const std::vector<double> p = measurement_distribution(circuit, sv);
  if (noise.kind == NoiseSpec::Kind::none) return p;
  return apply_noise(p, multiplicative_order(base, modulus), t, noise);
}

/// Memoizes outcome distributions; thread-safe.
class DistributionCache {
 public:
  const std::vector<double>& get(u64 modulus, u64 base, unsigned t, Backend backend,
                                 const NoiseSpec& noise) {
    const Key key{modulus, base, t, static_cast<int>(backend), noise.str()};
    {
      std::lock_guard lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto p = outcome_distribution(modulus, base, t, backend, noise);
    std::lock_guard lock(mu_);
    return cache_.try_emplace(key, std::move(p)).first->second;
  }

 private:
  using Key = std::tuple<u64, u64, unsigned, int, std::string>;
  std::mutex mu_;
  std::map<Key, std::vector<double>> cache_;
};

struct OrderFindingRun {
  u64 base = 0;
  Histogram histogram;
  std::optional<u64> outcome;          // set for single-shot runs
  std::optional<u64> recovered_order;  // single shot: from y; histogram: majority
  u64 shots_recovering_order = 0;      // shots whose outcome validates some order
};

/// One order-finding run for a fixed base. shots == 1 gives the
/// single-outcome run used by the factoring loop.
inline OrderFindingRun order_finding_run(const ExperimentConfig& config, u64 base, Rng& rng,
                                         DistributionCache* cache = nullptr) {
  const unsigned t = config.resolved_phase_bits();
  std::vector<double> local;
  const std::vector<double>* p = nullptr;
  if (cache) {
    p = &cache->get(config.modulus, base, t, config.backend, config.noise);
  } else {
    local = outcome_distribution(config.modulus, base, t, config.backend, config.noise);
    p = &local;
  }
  OrderFindingRun run;
  run.base = base;
  run.histogram = sample_distribution(*p, config.shots, rng);
  const u64 grid = run.histogram.grid();
  const RecoverOptions opts{0, config.multiple_cap};

  std::map<u64, u64> votes;
  for (u64 y = 0; y < grid; ++y) {
    const u64 c = run.histogram.counts[y];
    if (c == 0) continue;
    if (config.shots == 1) run.outcome = y;
    if (auto r = recover_order(y, grid, base, config.modulus, opts)) {
      votes[*r] += c;
      run.shots_recovering_order += c;
    }
  }
  if (!votes.empty()) {
    run.recovered_order = std::max_element(votes.begin(), votes.end(), [](auto& a, auto& b) {
                            return a.second < b.second;
                          })->first;
  }
  return run;
}

enum class AttemptBranch { lucky_gcd, no_order, odd_order, trivial_root, no_factor, success };

inline const char* to_string(AttemptBranch b) {
  switch (b) {
    case AttemptBranch::lucky_gcd: return "lucky_gcd";
    case AttemptBranch::no_order: return "no_order";
    case AttemptBranch::odd_order: return "odd_order";
    case AttemptBranch::trivial_root: return "trivial_root";
    case AttemptBranch::no_factor: return "no_factor";
    case AttemptBranch::success: return "success";
  }
  return "?";
}

struct AttemptRecord {
  u64 base = 0;
  std::optional<u64> outcome;
  std::optional<u64> order;
  AttemptBranch branch = AttemptBranch::no_order;
};

struct FactoringResult {
  u64 modulus = 0;
  std::optional<std::pair<u64, u64>> factors;
  std::vector<AttemptRecord> attempts;
  unsigned total_runs = 0;  // quantum order-finding runs
};

/// Throws a precondition error naming the failing check.
inline void check_factorable(u64 modulus) {
  using detail::require;
  require(modulus >= 3, ErrorKind::precondition, "N must be >= 3");
  require(modulus % 2 == 1, ErrorKind::precondition,
          "N=" + std::to_string(modulus) + " is even (factor 2 classically)");
  require(!is_prime(modulus), ErrorKind::precondition,
          "N=" + std::to_string(modulus) + " is prime");
  require(!is_prime_power(modulus), ErrorKind::precondition,
          "N=" + std::to_string(modulus) + " is a prime power");
}

/// Shor's loop. Attempt i draws from stream i of config.seed, so traces do
/// not depend on how attempts are scheduled.
inline FactoringResult shor_factor(const ExperimentConfig& config,
                                   DistributionCache* cache = nullptr) {
  check_factorable(config.modulus);
  const u64 modulus = config.modulus;
  ExperimentConfig single = config;
  single.shots = 1;
  const unsigned t = config.resolved_phase_bits();
  const u64 grid = u64{1} << t;

  FactoringResult result;
  result.modulus = modulus;
  for (unsigned i = 0; i < config.max_attempts; ++i) {
    Rng rng = make_rng(config.seed, i);
    AttemptRecord rec;
    rec.base = config.base ? *config.base : uniform_int(rng, 2, modulus - 1);
    const u64 g = gcd(rec.base, modulus);
    if (g > 1) {
      rec.branch = AttemptBranch::lucky_gcd;
      result.attempts.push_back(rec);
      result.factors = std::pair{std::min(g, modulus / g), std::max(g, modulus / g)};
      return result;
    }
    ++result.total_runs;
    const OrderFindingRun run = order_finding_run(single, rec.base, rng, cache);
    rec.outcome = run.outcome;
    rec.order = run.outcome
                    ? recover_order(*run.outcome, grid, rec.base, modulus, {0, config.multiple_cap})
                    : std::nullopt;
    if (!rec.order) {
      rec.branch = AttemptBranch::no_order;
    } else if (*rec.order % 2 == 1) {
      rec.branch = AttemptBranch::odd_order;
    } else if (mod_pow(rec.base, *rec.order / 2, modulus) == modulus - 1) {
      rec.branch = AttemptBranch::trivial_root;
    } else if (auto f = extract_factors(rec.base, *rec.order, modulus)) {
      rec.branch = AttemptBranch::success;
      result.attempts.push_back(rec);
      result.factors = f;
      return result;
    } else {
      rec.branch = AttemptBranch::no_factor;
    }
    result.attempts.push_back(rec);
  }
  return result;
}

struct RecordedExperiment {
  const char* name;
  u64 modulus;
  u64 base;
  unsigned phase_bits;
  u64 shots;
  u64 order;
  u64 hits;
};

/// Recorded parameters and hit counts of the four device runs.
inline constexpr RecordedExperiment kRecordedExperiments[] = {
    {"N15", 15, 7, 9, 2048, 4, 741},
    {"N21", 21, 2, 11, 4096, 6, 988},
    {"N35_a4", 35, 4, 10, 4096, 6, 751},
    {"N35_a8", 35, 8, 10, 4096, 4, 1144},
};

inline const RecordedExperiment& find_experiment(const std::string& name) {
  for (const auto& e : kRecordedExperiments)
    if (name == e.name) return e;
  detail::fail(ErrorKind::invalid_argument,
               "unknown experiment '" + name + "' (expected N15|N21|N35_a4|N35_a8)");
}

enum class ReplicationSource { simulate, paper_counts };

inline ReplicationSource parse_source(const std::string& s) {
  if (s == "simulate") return ReplicationSource::simulate;
  if (s == "paper-counts") return ReplicationSource::paper_counts;
  detail::fail(ErrorKind::config, "unknown source '" + s + "' (expected simulate|paper-counts)");
}

inline ExperimentConfig experiment_config(const RecordedExperiment& e, u64 seed = 1) {
  ExperimentConfig c;
  c.name = e.name;
  c.modulus = e.modulus;
  c.base = e.base;
  c.phase_bits = e.phase_bits;
  c.shots = e.shots;
  c.seed = seed;
  return c;
}

inline CertificationReport replicate_experiment(const std::string& name, ReplicationSource source,
                                                u64 seed = 1) {
  const RecordedExperiment& e = find_experiment(name);
  const u64 grid = u64{1} << e.phase_bits;
  if (source == ReplicationSource::paper_counts)
    return certify_counts(e.hits, e.shots, grid, e.modulus, e.base, e.order);
  const ExperimentConfig config = experiment_config(e, seed);
  Rng rng = make_rng(seed);
  const OrderFindingRun run = order_finding_run(config, e.base, rng);
  return certify(run.histogram, e.modulus, e.base, e.order, config.alpha, config.mode);
}

/// Simulates and certifies every coprime base of config.modulus on worker
/// threads. Base a uses stream a of config.seed.
inline std::vector<CertificationReport> sweep_bases(const ExperimentConfig& config) {
  config.validate();
  std::vector<u64> bases;
  for (u64 a = 2; a < config.modulus; ++a)
    if (gcd(a, config.modulus) == 1) bases.push_back(a);
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<CertificationReport> out;
  for (std::size_t begin = 0; begin < bases.size(); begin += workers) {
    std::vector<std::future<CertificationReport>> jobs;
    for (std::size_t i = begin; i < std::min(bases.size(), begin + workers); ++i) {
      jobs.push_back(std::async(std::launch::async, [&config, a = bases[i]] {
        Rng rng = make_rng(config.seed, a);
        const OrderFindingRun run = order_finding_run(config, a, rng);
        return certify(run.histogram, config.modulus, a, 0, config.alpha, config.mode);
      }));
    }
    for (auto& j : jobs) out.push_back(j.get());
  }
  return out;
}

}  // namespace shorcert
