#include "txlaw/config.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "txlaw/error.hpp"

namespace txlaw {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& t) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw InputError("config: not a number: '" + t + "'");
  }
  if (used != t.size()) throw InputError("config: not a number: '" + t + "'");
  return v;
}

}  // namespace

KeyValues parse_key_values(const std::string& text) {
  KeyValues out;
  std::istringstream in(text);
  std::string line, pending_key, pending;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (!pending_key.empty()) {
      // continuation of a bracketed list
      pending += " " + line;
      if (line.find(']') != std::string::npos) {
        out[pending_key] = trim(pending);
        pending_key.clear();
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw InputError("config line " + std::to_string(line_no) + ": empty key or value");
    if (out.count(key)) throw InputError("config: duplicate key '" + key + "'");
    if (value.front() == '[' && value.find(']') == std::string::npos) {
      pending_key = key;
      pending = value;
      continue;
    }
    out[key] = value;
  }
  if (!pending_key.empty()) throw InputError("config: unterminated list for '" + pending_key + "'");
  return out;
}

double parse_number(const std::string& token) {
  const std::string t = trim(token);
  if (t.empty()) throw InputError("config: empty number");
  const auto slash = t.find('/');
  if (slash == std::string::npos) return parse_plain(t);
  const double den = parse_plain(trim(t.substr(slash + 1)));
  if (den == 0.0) throw InputError("config: zero denominator in '" + t + "'");
  return parse_plain(trim(t.substr(0, slash))) / den;
}

std::vector<double> parse_list(const std::string& value) {
  std::string v = trim(value);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw InputError("config: list must end with ']'");
    v = v.substr(1, v.size() - 2);
  }
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item));
  }
  return out;
}

SigmaSpectrum sigma_from_config(const KeyValues& kv, const SigmaOptions& opts) {
  for (const auto& [k, v] : kv)
    if (k != "s" && k != "d" && k != "l" && k != "N" && k != "M") throw InputError("config: unknown key '" + k + "'");
  const bool has_s = kv.count("s") > 0, has_d = kv.count("d") > 0;
  if (has_s == has_d) throw InputError("config: exactly one of 's' or 'd' is required");
  std::vector<double> s = parse_list(kv.at(has_s ? "s" : "d"));
  if (has_d)
    for (double& x : s) x *= x;
  if (s.empty()) throw InputError("config: empty spectrum");

  const auto as_long = [&](const std::string& key) {
    const double v = parse_number(kv.at(key));
    if (v != std::floor(v) || v < 1) throw InputError("config: '" + key + "' must be a positive integer");
    return long(v);
  };
  long N = kv.count("N") ? as_long("N") : 0;
  long M = kv.count("M") ? as_long("M") : 0;

  std::vector<long> l;
  if (kv.count("l")) {
    for (const double x : parse_list(kv.at("l"))) {
      if (x != std::floor(x) || x < 1) throw InputError("config: multiplicities must be positive integers");
      l.push_back(long(x));
    }
    if (l.size() != s.size()) throw InputError("config: 's' and 'l' differ in length");
  } else {
    const long K = N && M ? std::min(N, M) : (N ? N : M);
    if (K == 0) {
      l.assign(s.size(), 1);
    } else {
      if (K % long(s.size()) != 0) throw InputError("config: K is not divisible by the number of eigenvalues");
      l.assign(s.size(), K / long(s.size()));
    }
  }
  const long total = std::accumulate(l.begin(), l.end(), 0L);
  if (!N && !M) N = M = total;
  if (!N) N = M;
  if (!M) M = N;
  return make_spectrum(s, l, N, M, opts);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SigmaSpectrum load_sigma(const std::string& path, const SigmaOptions& opts) {
  return sigma_from_config(parse_key_values(read_file(path)), opts);
}

}  // namespace txlaw
