#include "mrbcra/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mrbcra {
namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void fail(const std::string& msg) { throw InvalidConfig(msg); }

}  // namespace

SystemConfig validate_config(const SystemConfig& cfg) {
  if (cfg.L < 1) fail("L must be positive");
  if (cfg.N < cfg.L) fail("N < L (eta = N/L must be >= 1)");
  if (cfg.M < 1) fail("M must be positive");
  if (cfg.T < 1) fail("T must be positive");
  if (cfg.D < 1) fail("D < 1");
  if (cfg.D >= cfg.L) fail("D >= L");
  if (cfg.Kbar <= cfg.D) fail("Kbar <= D");
  if (!(cfg.lambda >= 0.0)) fail("lambda must be nonnegative");
  if (!std::isfinite(cfg.snr_db)) fail("snr_db must be finite");
  if (cfg.slots < 1) fail("slots must be positive");
  return cfg;
}

std::string config_to_text(const SystemConfig& cfg) {
  std::ostringstream out;
  out << "L = " << cfg.L << "\n";
  out << "N = " << cfg.N << "\n";
  out << "M = " << cfg.M << "\n";
  out << "T = " << cfg.T << "\n";
  out << "D = " << cfg.D << "\n";
  out << "Kbar = " << cfg.Kbar << "\n";
  out << "lambda = " << fmt_double(cfg.lambda) << "\n";
  out << "snr_db = " << fmt_double(cfg.snr_db) << "\n";
  out << "slots = " << cfg.slots << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

SystemConfig config_from_text(const std::string& text) {
  SystemConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Strip comments and whitespace.
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto notblank = line.find_first_not_of(" \t\r");
    if (notblank == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      fail("line " + std::to_string(lineno) + ": empty key or value");

    char* end = nullptr;
    auto as_int = [&](const char* name) {
      const long long v = std::strtoll(val.c_str(), &end, 10);
      if (end == val.c_str() || *end != '\0')
        fail(std::string(name) + ": not an integer: " + val);
      return v;
    };
    auto as_double = [&]() {
      const double v = std::strtod(val.c_str(), &end);
      if (end == val.c_str() || *end != '\0') fail(key + ": not a number: " + val);
      return v;
    };

    if (key == "L") cfg.L = static_cast<int>(as_int("L"));
    else if (key == "N") cfg.N = static_cast<int>(as_int("N"));
    else if (key == "M") cfg.M = static_cast<int>(as_int("M"));
    else if (key == "T") cfg.T = static_cast<int>(as_int("T"));
    else if (key == "D") cfg.D = static_cast<int>(as_int("D"));
    else if (key == "Kbar") cfg.Kbar = static_cast<int>(as_int("Kbar"));
    else if (key == "lambda") cfg.lambda = as_double();
    else if (key == "snr_db") cfg.snr_db = as_double();
    else if (key == "slots") cfg.slots = as_int("slots");
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::strtoull(val.c_str(), &end, 10));
    else fail("unknown key: " + key);
  }
  return validate_config(cfg);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_text(ss.str());
}

void save_config(const SystemConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write config file: " + path);
  out << config_to_text(cfg);
}

}  // namespace mrbcra
