#pragma once

#include <map>
#include <string>
#include <vector>

#include "txlaw/sigma.hpp"

namespace txlaw {

// Plain-text key = value; values are numbers, fractions such as 32/17, or
// bracketed lists of those. Text after '#' is ignored.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
double parse_number(const std::string& token);
std::vector<double> parse_list(const std::string& value);

// Keys: s (eigenvalues of Σ) or d (singular values of T), l (multiplicities),
// N, M. Missing l splits K evenly; missing N and M default to Σ l.
SigmaSpectrum sigma_from_config(const KeyValues& kv, const SigmaOptions& opts = {});
SigmaSpectrum load_sigma(const std::string& path, const SigmaOptions& opts = {});

std::string read_file(const std::string& path);

}  // namespace txlaw
