#include "tte/caps.hpp"

#include <cstdlib>
#include <string>

#include "tte/errors.hpp"

namespace tte {

namespace {

std::uint64_t parse_count(const std::string& key, const std::string& value) {
  // Accept plain integers and scientific shorthand like 1e8.
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    throw InputError("TTE_CAPS: bad value for " + key + ": '" + value + "'");
  }
  if (used != value.size() || v < 1 || v > 1e18) {
    throw InputError("TTE_CAPS: bad value for " + key + ": '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

Caps Caps::parse(std::string_view text) { return parse(text, Caps{}); }

Caps Caps::parse(std::string_view text, const Caps& base) {
  Caps caps = base;
  std::string s(text);
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string item = s.substr(pos, end - pos);
    pos = end + 1;
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw InputError("TTE_CAPS: expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    if (key == "pairings") {
      caps.pairings = parse_count(key, value);
    } else if (key == "terms") {
      caps.terms = parse_count(key, value);
    } else if (key == "dim") {
      caps.dim = parse_count(key, value);
    } else if (key == "brute") {
      caps.brute_force = parse_count(key, value);
    } else if (key == "conj") {
      caps.conjugation_m = static_cast<int>(parse_count(key, value));
    } else {
      throw InputError("TTE_CAPS: unknown key '" + key + "'");
    }
  }
  return caps;
}

Caps Caps::from_env() {
  const char* env = std::getenv("TTE_CAPS");
  if (env == nullptr) return {};
  return parse(env);
}

}  // namespace tte
