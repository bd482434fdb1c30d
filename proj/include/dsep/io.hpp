#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dsep/grid.hpp"

namespace dsep {

// RG2: 16-byte header ("RG2\0", u32 LE side, reserved zero bytes 8..15),
// then side^2 f64 LE values row-major.
std::vector<unsigned char> encode_rg2(const Grid2& g);
Grid2 decode_rg2(const std::vector<unsigned char>& bytes);
Grid2 read_rg2(const std::string& path);
void write_rg2(const std::string& path, const Grid2& g);

// Writes to path.tmp and renames over path.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

struct PgmScale {
  double min = 0.0;
  double max = 0.0;
};

// 16-bit P5 with min-max scaling; the scale goes to path + ".scale".
PgmScale write_pgm(const std::string& path, const Grid2& g);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};

CsvTable parse_csv(const std::string& text);
// Shortest round-trip decimal form.
std::string format_double(double x);

// key = value lines, '#' starts a comment. Keys read through the typed
// getters are recorded; check_consumed() rejects any key never read.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text);
  static KeyValueConfig load(const std::string& path);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback);
  std::optional<std::string> get_optional(const std::string& key);
  double get_double(const std::string& key, double fallback);
  std::optional<double> get_optional_double(const std::string& key);
  long long get_int(const std::string& key, long long fallback);
  std::size_t get_size(const std::string& key, std::size_t fallback);
  bool get_bool(const std::string& key, bool fallback);
  std::vector<std::size_t> get_size_list(const std::string& key, const std::vector<std::size_t>& fallback);

  void check_consumed() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::size_t> lines_;
  std::map<std::string, bool> used_;
};

}  // namespace dsep
