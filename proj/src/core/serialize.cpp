#include "idmps/core/serialize.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "idmps/core/errors.hpp"

namespace idmps::io {

using hilbert::CVector;
using hilbert::StateVector;

json state_to_json(const StateVector& v) {
  json amps = json::array();
  for (std::uint64_t r = 0; r < v.size(); ++r) amps.push_back({v[r].real(), v[r].imag()});
  return {{"N", v.sites()}, {"d", v.local_dim()}, {"normalized", v.normalized()}, {"amplitudes", std::move(amps)}};
}

StateVector state_from_json(const json& j) {
  try {
    const int n = j.at("N").get<int>();
    const int d = j.at("d").get<int>();
    const bool normalized = j.value("normalized", false);
    const auto& amps = j.at("amplitudes");
    CVector a(static_cast<Eigen::Index>(amps.size()));
    for (std::size_t i = 0; i < amps.size(); ++i) {
      const auto& pair = amps[i];
      if (!pair.is_array() || pair.size() != 2) throw IoError("amplitude entries must be [re, im] pairs");
      a[static_cast<Eigen::Index>(i)] = {pair[0].get<double>(), pair[1].get<double>()};
    }
    return StateVector(n, d, std::move(a), normalized);
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed state JSON: ") + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + tmp + " for writing");
    os << text;
    if (!os) throw IoError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, p);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_state_json(const std::string& path, const StateVector& v, const json& metadata) {
  json j = state_to_json(v);
  if (!metadata.is_null()) j["metadata"] = metadata;
  write_text_file(path, j.dump(1) + "\n");
}

StateVector read_state_json(const std::string& path, json* metadata) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + path + ": " + e.what());
  }
  if (metadata) *metadata = j.value("metadata", json(nullptr));
  return state_from_json(j);
}

namespace {

template <typename T>
void put_le(std::ostream& os, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw IoError("truncated binary state");
  if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void write_state_binary(std::ostream& os, const StateVector& v) {
  os.write(kBinaryMagic, sizeof(kBinaryMagic));
  put_le<std::uint16_t>(os, kBinaryVersion);
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(v.sites()));
  put_le<std::uint32_t>(os, static_cast<std::uint32_t>(v.local_dim()));
  put_le<std::uint32_t>(os, v.normalized() ? 1u : 0u);
  put_le<std::uint64_t>(os, v.size());
  for (std::uint64_t r = 0; r < v.size(); ++r) {
    put_le<double>(os, v[r].real());
    put_le<double>(os, v[r].imag());
  }
  if (!os) throw IoError("binary state write failed");
}

StateVector read_state_binary(std::istream& is) {
  char magic[sizeof(kBinaryMagic)];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0) throw IoError("not an IDMPS1 state file");
  const auto version = get_le<std::uint16_t>(is);
  if (version != kBinaryVersion) throw IoError("unsupported binary state version " + std::to_string(version));
  const auto n = get_le<std::uint32_t>(is);
  const auto d = get_le<std::uint32_t>(is);
  const auto flags = get_le<std::uint32_t>(is);
  const auto count = get_le<std::uint64_t>(is);
  hilbert::check_chain(static_cast<int>(n), static_cast<int>(d));
  if (count != hilbert::full_dim(static_cast<int>(n), static_cast<int>(d))) {
    throw IoError("binary state count does not match d^N");
  }
  CVector a(static_cast<Eigen::Index>(count));
  for (std::uint64_t i = 0; i < count; ++i) {
    const double re = get_le<double>(is);
    const double im = get_le<double>(is);
    a[static_cast<Eigen::Index>(i)] = {re, im};
  }
  return StateVector(static_cast<int>(n), static_cast<int>(d), std::move(a), (flags & 1u) != 0);
}

void write_state_binary(const std::string& path, const StateVector& v) {
  std::ostringstream os(std::ios::binary);
  write_state_binary(os, v);
  write_text_file(path, os.str());
}

StateVector read_state_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path);
  return read_state_binary(is);
}

}  // namespace idmps::io
