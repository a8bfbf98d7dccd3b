#pragma once

// Text formats used by the command line tool.
//
// Matrix CSV: one row per line, comma-separated decimal reals, no header.
// Vector CSV: a single column or a single row.
// Distribution CSV: `location,weight` per line; weights are normalized.
// JSON: flat objects, doubles printed with 17 significant digits.

#include "estimability/linop.hpp"
#include "estimability/robustness.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace estimability::io {

/// Rows of decimal reals; blank lines are skipped. Throws ParseError with the
/// offending line number.
std::vector<std::vector<double>> read_csv(std::istream &in);

DenseOperator read_matrix_csv(std::istream &in);
Vector read_vector_csv(std::istream &in);
EmpiricalDistribution read_distribution_csv(std::istream &in);

DenseOperator read_matrix_file(const std::filesystem::path &path);
Vector read_vector_file(const std::filesystem::path &path);
EmpiricalDistribution read_distribution_file(const std::filesystem::path &path);

/// %.17g, so every double round-trips.
std::string format_double(double value);

/// Writes each row as comma-separated 17-digit values under an optional header.
void write_csv(std::ostream &out, const std::vector<std::string> &header,
               const std::vector<Vector> &columns);

struct Null {};

using JsonValue =
    std::variant<Null, bool, std::int64_t, double, std::string, std::vector<double>>;

/// Insertion-ordered flat JSON object.
class JsonObject {
public:
  JsonObject &set(std::string key, JsonValue value);
  JsonObject &set(std::string key, const Vector &values);

  template <typename T>
    requires std::is_arithmetic_v<T>
  JsonObject &set(std::string key, T value) {
    if constexpr (std::is_same_v<T, bool>)
      return set(std::move(key), JsonValue(value));
    else if constexpr (std::is_integral_v<T>)
      return set(std::move(key), JsonValue(static_cast<std::int64_t>(value)));
    else
      return set(std::move(key), JsonValue(static_cast<double>(value)));
  }
  JsonObject &set(std::string key, const char *value) {
    return set(std::move(key), JsonValue(std::string(value)));
  }

  const JsonValue *find(const std::string &key) const;

  /// Non-finite doubles are written as null.
  std::string dump() const;

private:
  std::vector<std::pair<std::string, JsonValue>> entries_;
};

} // namespace estimability::io
