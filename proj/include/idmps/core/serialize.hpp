#pragma once

// StateVector files.
//
// JSON:   {"N", "d", "normalized", "amplitudes": [[re, im], ...], "metadata"?}
// Binary: "IDMPS1" | u16 version | u32 N | u32 d | u32 flags | u64 count |
//         count x (f64 re, f64 im), all little-endian. flags bit 0 = normalized.

#include <iosfwd>
#include <string>

#include "idmps/core/hilbert.hpp"
#include "json.hpp"

namespace idmps::io {

using nlohmann::json;

inline constexpr char kBinaryMagic[6] = {'I', 'D', 'M', 'P', 'S', '1'};
inline constexpr std::uint16_t kBinaryVersion = 1;

json state_to_json(const hilbert::StateVector& v);
hilbert::StateVector state_from_json(const json& j);

void write_state_json(const std::string& path, const hilbert::StateVector& v, const json& metadata = nullptr);
hilbert::StateVector read_state_json(const std::string& path, json* metadata = nullptr);

void write_state_binary(std::ostream& os, const hilbert::StateVector& v);
hilbert::StateVector read_state_binary(std::istream& is);
void write_state_binary(const std::string& path, const hilbert::StateVector& v);
hilbert::StateVector read_state_binary(const std::string& path);

// Writes text atomically enough for our purposes: temp file, then rename.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace idmps::io
