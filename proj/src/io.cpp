#include "trajbound/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "trajbound/error.hpp"

namespace trajbound {

namespace {

constexpr std::uint8_t kMagic[4] = {0x54, 0x52, 0x4A, 0x4C};
constexpr std::uint8_t kVersion = 1;

void put_le(std::vector<std::uint8_t>& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le(std::span<const std::uint8_t> in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(in[at + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("write failed for " + path.string());
}

bool has_extension(const std::filesystem::path& path, const char* ext) { return path.extension() == ext; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void write_csv(const SeriesMatrix& m, const std::filesystem::path& path) {
  std::string text;
  for (std::size_t c = 0; c < m.cols(); ++c) text += (c ? ",c" : "c") + std::to_string(c);
  text += '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) text += ',';
      text += format_double(m(r, c));
    }
    text += '\n';
  }
  spit(path, text);
}

SeriesMatrix read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError("csv: missing header");
  const std::size_t cols = split(trim(line), ',').size();
  if (cols == 0) throw FormatError("csv: empty header");
  std::vector<double> data;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != cols) throw FormatError("csv: row " + std::to_string(rows + 1) + " has wrong width");
    for (const auto& f : fields) {
      double v = 0.0;
      try {
        v = parse_double(trim(f));
      } catch (const Error&) {
        throw FormatError("csv: unparsable value '" + f + "'");
      }
      if (!std::isfinite(v)) throw FormatError("csv: non-finite value");
      data.push_back(v);
    }
    ++rows;
  }
  return SeriesMatrix(rows, cols, std::move(data));
}

}  // namespace

std::vector<std::uint8_t> encode_log(const SeriesMatrix& m, LogDtype dtype) {
  std::vector<std::uint8_t> out(kMagic, kMagic + 4);
  out.push_back(kVersion);
  out.push_back(static_cast<std::uint8_t>(dtype));
  put_le(out, 0, 2);
  put_le(out, m.rows(), 8);
  put_le(out, m.cols(), 8);
  out.reserve(out.size() + m.data().size() * (dtype == LogDtype::f64 ? 8 : 4));
  for (double v : m.data()) {
    if (!std::isfinite(v)) throw FormatError("trajectory log: non-finite value on write");
    if (dtype == LogDtype::f64) {
      put_le(out, std::bit_cast<std::uint64_t>(v), 8);
    } else {
      const float f = static_cast<float>(v);
      if (!std::isfinite(f)) throw FormatError("trajectory log: value " + format_double(v) + " exceeds 32-bit range");
      put_le(out, std::bit_cast<std::uint32_t>(f), 4);
    }
  }
  return out;
}

SeriesMatrix decode_log_record(std::span<const std::uint8_t> bytes, std::size_t& offset) {
  if (bytes.size() < offset || bytes.size() - offset < kLogHeaderBytes) throw FormatError("trajectory log: header short");
  const auto head = bytes.subspan(offset);
  if (std::memcmp(head.data(), kMagic, 4) != 0) throw FormatError("trajectory log: bad magic");
  if (head[4] != kVersion) throw FormatError("trajectory log: unsupported version " + std::to_string(head[4]));
  if (head[5] > 1) throw FormatError("trajectory log: bad dtype " + std::to_string(head[5]));
  if (get_le(head, 6, 2) != 0) throw FormatError("trajectory log: reserved field nonzero");
  const std::uint64_t rows = get_le(head, 8, 8);
  const std::uint64_t cols = get_le(head, 16, 8);
  const std::size_t width = head[5] == 1 ? 8 : 4;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / width;
  if (cols != 0 && rows > limit / cols) throw FormatError("trajectory log: n_rows * n_cols overflows");
  const std::uint64_t payload = rows * cols * width;
  if (head.size() - kLogHeaderBytes < payload) throw FormatError("trajectory log: payload short");

  std::vector<double> data(static_cast<std::size_t>(rows * cols));
  std::size_t at = kLogHeaderBytes;
  for (auto& v : data) {
    v = width == 8 ? std::bit_cast<double>(get_le(head, at, 8))
                   : static_cast<double>(std::bit_cast<float>(static_cast<std::uint32_t>(get_le(head, at, 4))));
    if (!std::isfinite(v)) throw FormatError("trajectory log: non-finite value");
    at += width;
  }
  offset += at;
  return SeriesMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(data));
}

SeriesMatrix decode_log(std::span<const std::uint8_t> bytes) {
  std::size_t offset = 0;
  SeriesMatrix m = decode_log_record(bytes, offset);
  if (offset != bytes.size()) throw FormatError("trajectory log: trailing bytes after payload");
  return m;
}

void write_log(const SeriesMatrix& m, const std::filesystem::path& path, LogDtype dtype) {
  if (has_extension(path, ".csv")) return write_csv(m, path);
  const auto bytes = encode_log(m, dtype);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

SeriesMatrix read_log(const std::filesystem::path& path) {
  if (has_extension(path, ".csv")) return read_csv(path);
  return decode_log(slurp(path));
}

void write_weights(std::span<const WeightMatrix> layers, const std::filesystem::path& path) {
  if (has_extension(path, ".trjl")) {
    std::vector<std::uint8_t> bytes;
    for (const auto& layer : layers) {
      const auto rec = encode_log(layer.values);
      bytes.insert(bytes.end(), rec.begin(), rec.end());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    return;
  }
  std::string text;
  for (const auto& layer : layers) {
    text += "layer " + std::to_string(layer.layer_index) + ' ' + std::to_string(layer.rows()) + ' ' +
            std::to_string(layer.cols()) + '\n';
    for (std::size_t r = 0; r < layer.rows(); ++r) {
      for (std::size_t c = 0; c < layer.cols(); ++c) {
        if (c) text += ' ';
        text += format_double(layer.values(r, c));
      }
      text += '\n';
    }
  }
  spit(path, text);
}

std::vector<WeightMatrix> read_weights(const std::filesystem::path& path) {
  std::vector<WeightMatrix> layers;
  if (has_extension(path, ".trjl")) {
    const auto bytes = slurp(path);
    std::size_t offset = 0;
    while (offset < bytes.size()) layers.push_back({layers.size(), decode_log_record(bytes, offset)});
    return layers;
  }
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::string word;
  while (in >> word) {
    if (word != "layer") throw FormatError("weights: expected 'layer', got '" + word + "'");
    std::size_t index = 0, rows = 0, cols = 0;
    if (!(in >> index >> rows >> cols) || rows == 0 || cols == 0) throw FormatError("weights: bad layer header");
    std::vector<double> data(rows * cols);
    for (auto& v : data) {
      std::string token;
      if (!(in >> token)) throw FormatError("weights: layer " + std::to_string(index) + " payload short");
      try {
        v = parse_double(token);
      } catch (const Error&) {
        throw FormatError("weights: unparsable value '" + token + "'");
      }
      if (!std::isfinite(v)) throw FormatError("weights: non-finite value");
    }
    layers.push_back({index, SeriesMatrix(rows, cols, std::move(data))});
  }
  return layers;
}

std::string format_key_values(const KeyValues& kv) {
  std::string text;
  for (const auto& [k, v] : kv) text += k + '=' + v + '\n';
  return text;
}

void write_key_values(const KeyValues& kv, const std::filesystem::path& path) { spit(path, format_key_values(kv)); }

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("key=value: malformed line '" + line + "'");
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

const std::string* find_value(const KeyValues& kv, const std::string& key) {
  for (const auto& [k, v] : kv)
    if (k == key) return &v;
  return nullptr;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw FormatError("cannot parse number '" + s + "'");
  }
  return v;
}

}  // namespace trajbound
