#pragma once

#include <arpa/inet.h>

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hatchet/address.hpp"

namespace testutil {

inline hatchet::Ipv6Address addr(const std::string& text) {
  hatchet::Ipv6Address a;
  if (inet_pton(AF_INET6, text.c_str(), a.octets.data()) != 1) throw std::invalid_argument("bad address " + text);
  return a;
}

inline std::vector<std::uint8_t> from_hex(const std::string& text) {
  std::string digits;
  for (char c : text) {
    if (c != ' ') digits += c;
  }
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < digits.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(digits.substr(i, 2), nullptr, 16)));
  }
  return out;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) out.push_back(item);
  return out;
}

inline std::vector<std::vector<std::string>> read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing " + path);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split(line, ';'));
  }
  return rows;
}

// Random address sharing the first `prefix` octets with `base`; the rest differs.
inline hatchet::Ipv6Address random_with_prefix(std::mt19937_64& rng, const hatchet::Ipv6Address& base, int prefix) {
  hatchet::Ipv6Address a = base;
  for (int i = prefix; i < 16; ++i) a.octets[i] = static_cast<std::uint8_t>(rng());
  if (prefix < 16 && a.octets[prefix] == base.octets[prefix]) a.octets[prefix] ^= 0x80;
  if (a.is_unspecified()) a.octets[15] = 1;
  return a;
}

}  // namespace testutil
