#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace txlaw {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Shortest round-trip text for doubles; "nan" for NaN.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_json(const std::string& path, const nlohmann::json& j);

struct Manifest {
  std::string command;
  std::string inputs_hash;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  nlohmann::json settings;  // every effective option, defaults included
  std::vector<std::string> outputs;
};

nlohmann::json to_json(const Manifest& m);

}  // namespace txlaw
