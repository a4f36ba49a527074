// shorcert: simulate, certify, factor, replicate and sweep from the shell.
//
// Exit codes: 0 ok, 1 config/validation, 2 capacity, 3 I/O, 4 attempt cap
// exhausted (factor only).

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "shorcert/shorcert.hpp"

namespace fs = std::filesystem;
using namespace shorcert;

namespace {

constexpr int kExitCapExhausted = 4;

struct Overrides {
  std::optional<u64> seed;
  std::optional<std::string> backend;
  std::optional<std::string> noise;
  std::optional<std::string> mode;
  std::optional<double> alpha;
  std::optional<std::string> out;
  bool plot = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--backend", o.backend, "perm | arith");
  cmd->add_option("--noise", o.noise, "none | trunc:KEPT[,nozero] | uniform:LAMBDA");
  cmd->add_option("--mode", o.mode, "strict | inclusive");
  cmd->add_option("--alpha", o.alpha, "significance level");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--plot", o.plot, "also write an SVG histogram");
}

void apply(const Overrides& o, RunManifest& m) {
  auto& c = m.config;
  if (o.seed) c.seed = *o.seed;
  if (o.backend) c.backend = parse_backend(*o.backend);
  if (o.noise) c.noise = NoiseSpec::parse(*o.noise);
  if (o.mode) c.mode = parse_window_mode(*o.mode);
  if (o.alpha) c.alpha = *o.alpha;
  if (o.out) m.out_dir = *o.out;
  if (o.plot) m.plot = true;
}

fs::path prepare_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  detail::require(!ec, ErrorKind::io, "cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

std::string report_text(const CertificationReport& r, const Metadata& meta) {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  const auto fields = to_json(r);
  for (const auto& [k, v] : fields.items()) os << k << '=' << v.dump() << '\n';
  return os.str();
}

std::string report_csv(const CertificationReport& r, const Metadata& meta) {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  os << "field,value\n";
  const auto fields = to_json(r);
  for (const auto& [k, v] : fields.items()) os << k << ',' << v.dump() << '\n';
  return os.str();
}

fs::path write_report(const fs::path& dir, const CertificationReport& r, const Metadata& meta,
                      ReportFormat format) {
  fs::path path;
  switch (format) {
    case ReportFormat::json:
      path = dir / "report.json";
      write_file(path.string(), report_json(r, meta).dump(2) + "\n");
      break;
    case ReportFormat::csv:
      path = dir / "report.csv";
      write_file(path.string(), report_csv(r, meta));
      break;
    case ReportFormat::text:
      path = dir / "report.txt";
      write_file(path.string(), report_text(r, meta));
      break;
  }
  return path;
}

// A manifest without a base gets one coprime base drawn from the seed.
u64 resolve_base(ExperimentConfig& c) {
  if (c.base) return *c.base;
  Rng rng = make_rng(c.seed, 0xba5e);
  u64 a = 0;
  do {
    a = uniform_int(rng, 2, c.modulus - 1);
  } while (gcd(a, c.modulus) != 1);
  c.base = a;
  return a;
}

int cmd_simulate(const std::string& config_path, const Overrides& o) {
  RunManifest m = parse_manifest(read_file(config_path));
  apply(o, m);
  ExperimentConfig& c = m.config;
  c.validate();
  const u64 a = resolve_base(c);
  detail::require(gcd(a, c.modulus) == 1, ErrorKind::config,
                  "a=" + std::to_string(a) + " shares a factor with N=" + std::to_string(c.modulus));

  Rng rng = make_rng(c.seed);
  const OrderFindingRun run = order_finding_run(c, a, rng);
  const CertificationReport report = certify(run.histogram, c.modulus, a, 0, c.alpha, c.mode);
  const Metadata meta = config_metadata(c);

  const fs::path dir = prepare_dir(m.out_dir);
  write_file((dir / "histogram.csv").string(), histogram_csv(run.histogram, meta));
  write_file((dir / "histogram.json").string(), histogram_json(run.histogram, meta).dump(2) + "\n");
  const fs::path report_path = write_report(dir, report, meta, m.format);
  if (m.plot) {
    const AcceptanceWindows w = acceptance_set(run.histogram.grid(), report.order, c.mode);
    const std::string title = "N=" + std::to_string(c.modulus) + " a=" + std::to_string(a) +
                              " t=" + std::to_string(c.resolved_phase_bits()) +
                              " shots=" + std::to_string(c.shots);
    write_file((dir / "histogram.svg").string(), histogram_svg(run.histogram, &w, title));
  }

  std::cout << "histogram: " << run.histogram.grid() << " bins, " << run.histogram.shots
            << " shots -> " << (dir / "histogram.csv").string() << '\n';
  if (run.recovered_order) std::cout << "recovered order: r=" << *run.recovered_order << '\n';
  std::cout << "report: " << report_path.string() << '\n';
  std::cout << verdict_line(report) << '\n';
  return 0;
}

struct CertifyArgs {
  std::string histogram;
  u64 modulus = 0;
  u64 base = 0;
  std::optional<u64> order;
  double alpha = 0.01;
  std::string mode = "inclusive";
  std::string out = ".";
};

int cmd_certify(const CertifyArgs& args) {
  const Histogram h = parse_histogram_csv(read_file(args.histogram));
  detail::require(h.shots >= 1, ErrorKind::config, "histogram has zero shots");
  detail::require(args.modulus >= 3, ErrorKind::config, "--N must be >= 3");
  detail::require(args.base > 1 && args.base < args.modulus, ErrorKind::config,
                  "--a must satisfy 1 < a < N");
  detail::require(args.alpha > 0.0 && args.alpha < 1.0, ErrorKind::config,
                  "--alpha must lie in (0, 1)");
  detail::require(gcd(args.base, args.modulus) == 1, ErrorKind::config, "a and N are not coprime");
  const WindowMode mode = parse_window_mode(args.mode);
  const u64 r = args.order ? *args.order : multiplicative_order(args.base, args.modulus);
  detail::require(r >= 1, ErrorKind::config, "--r must be >= 1");
  const CertificationReport report = certify(h, args.modulus, args.base, r, args.alpha, mode);

  Metadata meta{{"tool_version", kToolVersion},
                {"source", args.histogram},
                {"N", std::to_string(args.modulus)},
                {"a", std::to_string(args.base)},
                {"r", std::to_string(r)}};
  const fs::path dir = prepare_dir(args.out);
  const fs::path path = write_report(dir, report, meta, ReportFormat::json);
  std::cout << "report: " << path.string() << '\n';
  std::cout << verdict_line(report) << '\n';
  return 0;
}

struct FactorArgs {
  u64 modulus = 0;
  std::optional<u64> base;
  unsigned attempts = 20;
  unsigned phase_bits = 0;
};

int cmd_factor(const FactorArgs& args, const Overrides& o) {
  check_factorable(args.modulus);
  RunManifest m;
  m.out_dir = "out";
  m.config.modulus = args.modulus;
  m.config.base = args.base;
  m.config.max_attempts = args.attempts;
  m.config.phase_bits = args.phase_bits;
  apply(o, m);
  m.config.validate();
  const FactoringResult result = shor_factor(m.config);

  nlohmann::json trace = nlohmann::json::array();
  for (const auto& a : result.attempts) {
    nlohmann::json j;
    j["a"] = a.base;
    j["outcome"] = a.outcome ? nlohmann::json(*a.outcome) : nlohmann::json(nullptr);
    j["order"] = a.order ? nlohmann::json(*a.order) : nlohmann::json(nullptr);
    j["branch"] = to_string(a.branch);
    trace.push_back(j);
  }
  nlohmann::json doc;
  doc["meta"] = to_json(config_metadata(m.config));
  doc["N"] = result.modulus;
  doc["factors"] = result.factors
                       ? nlohmann::json::array({result.factors->first, result.factors->second})
                       : nlohmann::json(nullptr);
  doc["attempts"] = trace;
  doc["total_runs"] = result.total_runs;
  const fs::path dir = prepare_dir(m.out_dir);
  const fs::path path = dir / "factor.json";
  write_file(path.string(), doc.dump(2) + "\n");

  const unsigned width = m.config.resolved_phase_bits();
  for (std::size_t i = 0; i < result.attempts.size(); ++i) {
    const auto& a = result.attempts[i];
    std::cout << "attempt " << i + 1 << ": a=" << a.base;
    if (a.outcome) std::cout << " y=" << *a.outcome << " (" << bitstring(*a.outcome, width) << ")";
    if (a.order) std::cout << " r=" << *a.order;
    std::cout << " -> " << to_string(a.branch) << '\n';
  }
  std::cout << "trace: " << path.string() << '\n';
  if (!result.factors) {
    std::cout << args.modulus << ": no factor after " << result.attempts.size() << " attempts\n";
    return kExitCapExhausted;
  }
  std::cout << args.modulus << " = " << result.factors->first << " \xC3\x97 "
            << result.factors->second << '\n';
  return 0;
}

int cmd_replicate(const std::string& name, const std::string& source, u64 seed,
                  const std::string& out) {
  const RecordedExperiment& e = find_experiment(name);
  const ReplicationSource src = parse_source(source);
  const CertificationReport report = replicate_experiment(name, src, seed);
  ExperimentConfig c = experiment_config(e, seed);
  Metadata meta = config_metadata(c);
  meta.emplace_back("source", source);
  const fs::path dir = prepare_dir(out);
  const fs::path path = write_report(dir, report, meta, ReportFormat::json);
  std::cout << "report: " << path.string() << '\n';
  char diag[96];
  std::snprintf(diag, sizeof diag, "normal approximation p=%.2e", report.normal_approx_p_value);
  std::cout << diag << '\n';
  std::cout << verdict_line(report) << '\n';
  return 0;
}

int cmd_sweep(const std::string& config_path, const Overrides& o) {
  RunManifest m = parse_manifest(read_file(config_path));
  apply(o, m);
  m.config.validate();
  const auto reports = sweep_bases(m.config);
  nlohmann::json doc;
  doc["meta"] = to_json(config_metadata(m.config));
  doc["reports"] = nlohmann::json::array();
  for (const auto& r : reports) doc["reports"].push_back(to_json(r));
  const fs::path dir = prepare_dir(m.out_dir);
  const fs::path path = dir / "sweep.json";
  write_file(path.string(), doc.dump(2) + "\n");
  std::cout << "report: " << path.string() << '\n';
  for (const auto& r : reports) std::cout << verdict_line(r) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-finding simulator and QPE signal certification"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  std::string config_path;
  Overrides sim_o;
  auto* sim = app.add_subcommand("simulate", "run a manifest on the simulator and certify it");
  sim->add_option("--config", config_path, "manifest file")->required();
  add_overrides(sim, sim_o);

  CertifyArgs cert_args;
  auto* cert = app.add_subcommand("certify", "certify a histogram CSV");
  cert->add_option("histogram", cert_args.histogram, "histogram CSV (y,bitstring,count)")->required();
  cert->add_option("--N", cert_args.modulus, "modulus")->required();
  cert->add_option("--a", cert_args.base, "base")->required();
  cert->add_option("--r", cert_args.order, "order (computed from a when omitted)");
  cert->add_option("--alpha", cert_args.alpha, "significance level");
  cert->add_option("--mode", cert_args.mode, "strict | inclusive");
  cert->add_option("--out", cert_args.out, "output directory");

  FactorArgs fac_args;
  Overrides fac_o;
  auto* fac = app.add_subcommand("factor", "run the full factoring loop");
  fac->add_option("N", fac_args.modulus, "odd composite, not a prime power")->required();
  fac->add_option("--base", fac_args.base, "fix the base instead of drawing it");
  fac->add_option("--attempts", fac_args.attempts, "attempt cap");
  fac->add_option("--t", fac_args.phase_bits, "phase bits (default 2 ceil(log2 N))");
  add_overrides(fac, fac_o);

  std::string rep_name, rep_source = "paper-counts", rep_out = "out";
  u64 rep_seed = 1;
  auto* rep = app.add_subcommand("replicate", "replicate a recorded experiment");
  rep->add_option("name", rep_name, "N15 | N21 | N35_a4 | N35_a8")->required();
  rep->add_option("--source", rep_source, "paper-counts | simulate");
  rep->add_option("--seed", rep_seed, "RNG seed for --source simulate");
  rep->add_option("--out", rep_out, "output directory");

  std::string sweep_path;
  Overrides sweep_o;
  auto* sweep = app.add_subcommand("sweep", "certify every coprime base of a manifest's N");
  sweep->add_option("--config", sweep_path, "manifest file")->required();
  add_overrides(sweep, sweep_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sim) return cmd_simulate(config_path, sim_o);
    if (*cert) return cmd_certify(cert_args);
    if (*fac) return cmd_factor(fac_args, fac_o);
    if (*rep) return cmd_replicate(rep_name, rep_source, rep_seed, rep_out);
    if (*sweep) return cmd_sweep(sweep_path, sweep_o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  }
  return 1;
}
