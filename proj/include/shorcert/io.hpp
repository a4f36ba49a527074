#pragma once

// Artifact formats: histogram CSV/JSON, report JSON, SVG histogram plots,
// and the flat key-value run manifest.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "shorcert/cert.hpp"
#include "shorcert/error.hpp"
#include "shorcert/noise.hpp"
#include "shorcert/qpe.hpp"
#include "shorcert/rng.hpp"
#include "shorcert/shor.hpp"
#include "shorcert/sim.hpp"

namespace shorcert {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kManifestSchema = 1;

/// Ordered key/value pairs embedded in every artifact.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline Metadata config_metadata(const ExperimentConfig& c) {
  Metadata m;
  m.emplace_back("tool_version", kToolVersion);
  m.emplace_back("schema", std::to_string(kManifestSchema));
  if (!c.name.empty()) m.emplace_back("name", c.name);
  m.emplace_back("N", std::to_string(c.modulus));
  m.emplace_back("a", c.base ? std::to_string(*c.base) : "random");
  m.emplace_back("t", std::to_string(c.resolved_phase_bits()));
  m.emplace_back("shots", std::to_string(c.shots));
  m.emplace_back("backend", to_string(c.backend));
  m.emplace_back("noise", c.noise.str());
  std::ostringstream alpha;
  alpha << c.alpha;
  m.emplace_back("alpha", alpha.str());
  m.emplace_back("mode", to_string(c.mode));
  m.emplace_back("seed", std::to_string(c.seed));
  m.emplace_back("attempts", std::to_string(c.max_attempts));
  m.emplace_back("rng", kRngName);
  return m;
}

inline nlohmann::json to_json(const Metadata& m) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

inline std::string bitstring(u64 y, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if ((y >> i) & 1) s[width - 1 - i] = '1';
  return s;
}

/// Dense CSV: metadata as '# key=value' lines, then y,bitstring,count.
/// The bitstring is written most-significant bit first.
inline std::string histogram_csv(const Histogram& h, const Metadata& meta) {
  std::ostringstream os;
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  os << "y,bitstring,count\n";
  for (u64 y = 0; y < h.grid(); ++y)
    os << y << ',' << bitstring(y, h.phase_bits) << ',' << h.counts[y] << '\n';
  return os.str();
}

/// Parses y,bitstring,count rows; '#' lines and the header are skipped.
/// Missing rows count as zero. L comes from the bitstring width.
inline Histogram parse_histogram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::pair<u64, u64>> rows;
  int width = -1;
  std::size_t lineno = 0;
  auto bad = [&](const std::string& why) {
    detail::fail(ErrorKind::config,
                 "histogram line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("y,", 0) == 0) continue;
    std::istringstream row(line);
    std::string ys, bits, cs;
    if (!std::getline(row, ys, ',') || !std::getline(row, bits, ',') || !std::getline(row, cs))
      bad("expected y,bitstring,count");
    if (bits.empty() || bits.find_first_not_of("01") != std::string::npos)
      bad("bitstring must be non-empty and binary");
    if (width < 0) width = static_cast<int>(bits.size());
    if (static_cast<int>(bits.size()) != width) bad("inconsistent bitstring width");
    if (width > 30) bad("bitstring wider than 30 bits");
    u64 y = 0, count = 0;
    try {
      std::size_t used = 0;
      y = std::stoull(ys, &used);
      if (used != ys.size()) bad("bad outcome index");
      count = std::stoull(cs, &used);
      if (used != cs.size()) bad("bad count");
    } catch (const std::logic_error&) {
      bad("non-numeric field");
    }
    if (y != std::stoull(bits, nullptr, 2)) bad("y does not match bitstring");
    rows.emplace_back(y, count);
  }
  if (width < 0) detail::fail(ErrorKind::config, "histogram has no rows");
  Histogram h(static_cast<unsigned>(width));
  for (const auto& [y, c] : rows)
    if (c > 0) h.add(y, c);
  return h;
}

inline nlohmann::json histogram_json(const Histogram& h, const Metadata& meta) {
  nlohmann::json j;
  j["meta"] = to_json(meta);
  j["t"] = h.phase_bits;
  j["L"] = h.grid();
  j["shots"] = h.shots;
  j["counts"] = h.counts;
  return j;
}

inline nlohmann::json report_json(const CertificationReport& r, const Metadata& meta) {
  nlohmann::json j = to_json(r);
  j["meta"] = to_json(meta);
  return j;
}

/// Bar chart of counts with acceptance windows shaded and the uniform
/// expectation shots/L drawn as a horizontal rule.
inline std::string histogram_svg(const Histogram& h, const AcceptanceWindows* windows,
                                 const std::string& title) {
  const double width = 960, height = 360, left = 60, right = 20, top = 36, bottom = 40;
  const double pw = width - left - right, ph = height - top - bottom;
  const u64 L = h.grid();
  const u64 peak = std::max<u64>(1, *std::max_element(h.counts.begin(), h.counts.end()));
  const double expect = static_cast<double>(h.shots) / static_cast<double>(L);
  const double ymax = std::max(static_cast<double>(peak), expect) * 1.05;
  const double bw = pw / static_cast<double>(L);
  auto xpos = [&](double y) { return left + y * bw; };
  auto ypos = [&](double c) { return top + ph - c / ymax * ph; };

  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(2);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << left << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"14\">" << title
     << "</text>\n";
  if (windows) {
    for (u64 y : windows->bins)
      os << "<rect x=\"" << xpos(static_cast<double>(y)) << "\" y=\"" << top << "\" width=\""
         << bw << "\" height=\"" << ph << "\" fill=\"#dbe9f6\"/>\n";
  }
  for (u64 y = 0; y < L; ++y) {
    if (h.counts[y] == 0) continue;
    const double c = static_cast<double>(h.counts[y]);
    os << "<rect x=\"" << xpos(static_cast<double>(y)) << "\" y=\"" << ypos(c) << "\" width=\""
       << std::max(bw, 0.5) << "\" height=\"" << (top + ph - ypos(c)) << "\" fill=\"#1f4e79\"/>\n";
  }
  os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << ypos(expect)
     << "\" y2=\"" << ypos(expect)
     << "\" stroke=\"#c0392b\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";
  os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << top + ph << "\" y2=\""
     << top + ph << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" x2=\"" << left << "\" y1=\"" << top << "\" y2=\"" << top + ph
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << left << "\" y=\"" << height - 12
     << "\" font-family=\"sans-serif\" font-size=\"11\">0</text>\n";
  os << "<text x=\"" << left + pw - 30 << "\" y=\"" << height - 12
     << "\" font-family=\"sans-serif\" font-size=\"11\">" << L - 1 << "</text>\n";
  os << "<text x=\"8\" y=\"" << top + 10 << "\" font-family=\"sans-serif\" font-size=\"11\">"
     << peak << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  detail::require(static_cast<bool>(in), ErrorKind::io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  detail::require(static_cast<bool>(out), ErrorKind::io, "cannot write '" + path + "'");
  out << content;
  detail::require(static_cast<bool>(out), ErrorKind::io, "write failed for '" + path + "'");
}

enum class ReportFormat { json, csv, text };

inline ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "text") return ReportFormat::text;
  detail::fail(ErrorKind::config, "unknown report format '" + s + "' (expected json|csv|text)");
}

struct RunManifest {
  ExperimentConfig config;
  std::string out_dir = "out";
  bool plot = false;
  ReportFormat format = ReportFormat::json;
};

/// Flat `key = value` manifest; '#' starts a comment. `schema` must be 1.
inline RunManifest parse_manifest(const std::string& text) {
  RunManifest m;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_schema = false, have_n = false;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "manifest line " + std::to_string(lineno) + ": ";
    detail::require(eq != std::string::npos, ErrorKind::config, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto to_u64 = [&](const std::string& v) -> u64 {
      try {
        std::size_t used = 0;
        const u64 x = std::stoull(v, &used);
        if (used == v.size() && v[0] != '-') return x;
      } catch (const std::logic_error&) {
      }
      detail::fail(ErrorKind::config, where + "'" + key + "' needs a non-negative integer");
    };
    auto& c = m.config;
    if (key == "schema") {
      detail::require(value == std::to_string(kManifestSchema), ErrorKind::config,
                      where + "unsupported schema version " + value);
      have_schema = true;
    } else if (key == "name") {
      c.name = value;
    } else if (key == "N") {
      c.modulus = to_u64(value);
      have_n = true;
    } else if (key == "a") {
      if (value == "random")
        c.base.reset();
      else
        c.base = to_u64(value);
    } else if (key == "t") {
      c.phase_bits = static_cast<unsigned>(to_u64(value));
    } else if (key == "shots") {
      c.shots = to_u64(value);
    } else if (key == "backend") {
      c.backend = parse_backend(value);
    } else if (key == "noise") {
      c.noise = NoiseSpec::parse(value);
    } else if (key == "alpha") {
      try {
        c.alpha = std::stod(value);
      } catch (const std::logic_error&) {
        detail::fail(ErrorKind::config, where + "alpha must be a number");
      }
    } else if (key == "mode") {
      c.mode = parse_window_mode(value);
    } else if (key == "seed") {
      c.seed = to_u64(value);
    } else if (key == "attempts") {
      c.max_attempts = static_cast<unsigned>(to_u64(value));
    } else if (key == "out") {
      m.out_dir = value;
    } else if (key == "plot") {
      detail::require(value == "true" || value == "false", ErrorKind::config,
                      where + "plot must be true or false");
      m.plot = value == "true";
    } else if (key == "format") {
      m.format = parse_report_format(value);
    } else {
      detail::fail(ErrorKind::config, where + "unknown key '" + key + "'");
    }
  }
  detail::require(have_schema, ErrorKind::config, "manifest is missing 'schema'");
  detail::require(have_n, ErrorKind::config, "manifest is missing 'N'");
  return m;
}

}  // namespace shorcert
