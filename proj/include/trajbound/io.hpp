#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trajbound/indicators.hpp"
#include "trajbound/series.hpp"

namespace trajbound {

// Binary trajectory log: "TRJL", version u8 = 1, dtype u8, reserved u16 = 0,
// n_rows u64 LE, n_cols u64 LE, then the row-major little-endian payload.
enum class LogDtype : std::uint8_t { f32 = 0, f64 = 1 };

inline constexpr std::size_t kLogHeaderBytes = 24;

std::vector<std::uint8_t> encode_log(const SeriesMatrix& m, LogDtype dtype = LogDtype::f64);

// Decodes one record starting at `offset`; advances offset past it.
SeriesMatrix decode_log_record(std::span<const std::uint8_t> bytes, std::size_t& offset);

// Decodes a buffer holding exactly one record.
SeriesMatrix decode_log(std::span<const std::uint8_t> bytes);

// Files ending in .csv use a `c0,c1,...` header and one row per line; anything
// else is the binary format.
void write_log(const SeriesMatrix& m, const std::filesystem::path& path, LogDtype dtype = LogDtype::f64);
SeriesMatrix read_log(const std::filesystem::path& path);

// Weight archive. Text: `layer <index> <rows> <cols>` followed by one line per row.
// Paths ending in .trjl hold concatenated binary records, one per layer.
void write_weights(std::span<const WeightMatrix> layers, const std::filesystem::path& path);
std::vector<WeightMatrix> read_weights(const std::filesystem::path& path);

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_key_values(const KeyValues& kv, const std::filesystem::path& path);
KeyValues read_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);
const std::string* find_value(const KeyValues& kv, const std::string& key);

// Shortest representation that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& s);

}  // namespace trajbound
