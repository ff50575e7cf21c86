#include "field_spec.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "spherevol/errors.hpp"
#include "spherevol/grid_field.hpp"
#include "spherevol/minimizers.hpp"

namespace spherevol::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return parts;
    start = pos + 1;
  }
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
  T value{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw InvalidArgument("field spec: cannot parse " + what + " from '" + s + "'");
  }
  return value;
}

// from_chars for double is missing from older libstdc++.
template <>
double parse_number<double>(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(value)) {
    throw InvalidArgument("field spec: cannot parse " + what + " from '" + s + "'");
  }
  return value;
}

int parse_k(const std::string& s) {
  const int k = parse_number<int>(s, "k");
  if (k < 1) throw InvalidArgument("field spec: k must be at least 1");
  return k;
}

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw InvalidArgument("field spec '" + text +
                          "': expected canonical:k, grid:<path> or perturbed:k:amplitude:seed");
  }
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);

  if (kind == "canonical") {
    const int k = parse_k(rest);
    return {text, canonical_field(k), k};
  }
  if (kind == "grid") {
    if (rest.empty()) throw InvalidArgument("field spec: grid needs a path");
    const GridField g = GridField::load(rest);
    return {text, g.to_angle_field(), 1 + std::abs(g.winding())};
  }
  if (kind == "perturbed") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) {
      throw InvalidArgument("field spec: perturbed expects k:amplitude:seed");
    }
    const int k = parse_k(parts[0]);
    const double amplitude = parse_number<double>(parts[1], "amplitude");
    if (amplitude < 0.0) throw InvalidArgument("field spec: amplitude must be non-negative");
    const auto seed = parse_number<unsigned long long>(parts[2], "seed");
    return {text, perturbed_field(k, amplitude, seed), k};
  }
  throw InvalidArgument("field spec: unknown kind '" + kind + "'");
}

}  // namespace spherevol::cli
