#include "dsep/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "dsep/error.hpp"

namespace dsep {

namespace {

constexpr unsigned char kMagic[4] = {'R', 'G', '2', '\0'};

void put_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<unsigned char>((v >> (8 * b)) & 0xffu));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(p[b]) << (8 * b);
  return v;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<unsigned char> encode_rg2(const Grid2& g) {
  if (g.side() > 0xffffffffu) throw ArgumentError("RG2: side too large");
  std::vector<unsigned char> out(kMagic, kMagic + 4);
  put_u32(out, static_cast<std::uint32_t>(g.side()));
  put_u32(out, 0);
  put_u32(out, 0);
  out.reserve(16 + 8 * g.size());
  for (double v : g.values()) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>((bits >> (8 * b)) & 0xffu));
  }
  return out;
}

Grid2 decode_rg2(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 16 || !std::equal(kMagic, kMagic + 4, bytes.begin()))
    throw ArgumentError("RG2: bad magic (expected \"RG2\\0\")");
  const std::uint32_t d = get_u32(bytes.data() + 4);
  if (get_u32(bytes.data() + 8) != 0 || get_u32(bytes.data() + 12) != 0) throw ArgumentError("RG2: reserved header bytes are not zero");
  if (d == 0) throw ArgumentError("RG2: zero side");
  const std::size_t n = static_cast<std::size_t>(d) * d;
  if (bytes.size() != 16 + 8 * n) {
    std::ostringstream os;
    os << "RG2: expected " << 16 + 8 * n << " bytes for side " << d << ", found " << bytes.size();
    throw ArgumentError(os.str());
  }
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    const unsigned char* p = bytes.data() + 16 + 8 * i;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(p[b]) << (8 * b);
    std::memcpy(&values[i], &bits, sizeof bits);
  }
  return Grid2(d, std::move(values));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ArgumentError("cannot write '" + tmp + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw ArgumentError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ArgumentError("cannot rename '" + tmp + "' to '" + path + "': " + ec.message());
  }
}

Grid2 read_rg2(const std::string& path) {
  const std::string s = read_file(path);
  try {
    return decode_rg2(std::vector<unsigned char>(s.begin(), s.end()));
  } catch (const ArgumentError& e) {
    throw ArgumentError(path + ": " + e.what());
  }
}

void write_rg2(const std::string& path, const Grid2& g) {
  const auto b = encode_rg2(g);
  write_file_atomic(path, std::string(b.begin(), b.end()));
}

PgmScale write_pgm(const std::string& path, const Grid2& g) {
  PgmScale sc;
  sc.min = *std::min_element(g.values().begin(), g.values().end());
  sc.max = *std::max_element(g.values().begin(), g.values().end());
  const double span = sc.max - sc.min;
  std::string out = "P5\n" + std::to_string(g.side()) + " " + std::to_string(g.side()) + "\n65535\n";
  // PGM rows run top to bottom; grid row 0 is x2 = 0.
  for (std::size_t r = g.side(); r-- > 0;)
    for (std::size_t c = 0; c < g.side(); ++c) {
      const double t = span > 0.0 ? (g(r, c) - sc.min) / span : 0.0;
      const auto v = static_cast<unsigned>(std::lround(t * 65535.0));
      out.push_back(static_cast<char>((v >> 8) & 0xffu));
      out.push_back(static_cast<char>(v & 0xffu));
    }
  write_file_atomic(path, out);
  write_file_atomic(path + ".scale", "min=" + format_double(sc.min) + "\nmax=" + format_double(sc.max) + "\n");
  return sc;
}

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

std::string CsvTable::str() const {
  std::string s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) s += ',';
      s += cells[i];
    }
    s += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return s;
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
      const auto c = line.find(',', pos);
      cells.push_back(line.substr(pos, c == std::string::npos ? std::string::npos : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      if (cells.size() != t.header.size()) throw ArgumentError("CSV: row width differs from header");
      t.rows.push_back(std::move(cells));
    }
  }
  if (first) throw ArgumentError("CSV: empty input");
  return t;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ArgumentError("config line " + std::to_string(no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ArgumentError("config line " + std::to_string(no) + ": empty key");
    if (cfg.values_.count(key))
      throw ArgumentError("config line " + std::to_string(no) + ": duplicate key '" + key + "'");
    cfg.values_[key] = value;
    cfg.lines_[key] = no;
    cfg.used_[key] = false;
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) { return parse(read_file(path)); }

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

std::optional<std::string> KeyValueConfig::get_optional(const std::string& key) {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  used_[key] = true;
  return it->second;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) {
  return get_optional(key).value_or(fallback);
}

std::optional<double> KeyValueConfig::get_optional_double(const std::string& key) {
  const auto s = get_optional(key);
  if (!s) return std::nullopt;
  double v = 0.0;
  const auto r = std::from_chars(s->data(), s->data() + s->size(), v);
  if (r.ec != std::errc() || r.ptr != s->data() + s->size() || !std::isfinite(v))
    throw ArgumentError("config key '" + key + "': '" + *s + "' is not a finite number");
  return v;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) {
  return get_optional_double(key).value_or(fallback);
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) {
  const auto s = get_optional(key);
  if (!s) return fallback;
  long long v = 0;
  const auto r = std::from_chars(s->data(), s->data() + s->size(), v);
  if (r.ec != std::errc() || r.ptr != s->data() + s->size())
    throw ArgumentError("config key '" + key + "': '" + *s + "' is not an integer");
  return v;
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t fallback) {
  const long long v = get_int(key, static_cast<long long>(fallback));
  if (v < 0) throw ArgumentError("config key '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) {
  const auto s = get_optional(key);
  if (!s) return fallback;
  if (*s == "true" || *s == "1" || *s == "yes") return true;
  if (*s == "false" || *s == "0" || *s == "no") return false;
  throw ArgumentError("config key '" + key + "': '" + *s + "' is not a boolean");
}

std::vector<std::size_t> KeyValueConfig::get_size_list(const std::string& key,
                                                       const std::vector<std::size_t>& fallback) {
  const auto s = get_optional(key);
  if (!s) return fallback;
  std::vector<std::size_t> out;
  std::istringstream in(*s);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    std::size_t v = 0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size())
      throw ArgumentError("config key '" + key + "': '" + *s + "' is not a comma-separated index list");
    out.push_back(v);
  }
  return out;
}

void KeyValueConfig::check_consumed() const {
  for (const auto& [key, used] : used_)
    if (!used) throw ArgumentError("config line " + std::to_string(lines_.at(key)) + ": unknown key '" + key + "'");
}

}  // namespace dsep
