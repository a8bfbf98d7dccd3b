#include "estimability/io.hpp"

#include "estimability/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace estimability::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view token, std::size_t line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+')
    token.remove_prefix(1);
  double value = 0.0;
  const auto *end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end)
    throw ParseError(line, "expected a decimal number, got '" + std::string(token) + "'");
  if (!std::isfinite(value))
    throw ParseError(line, "non-finite value '" + std::string(token) + "'");
  return value;
}

std::ifstream open(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw InvalidInput("cannot open '" + path.string() + "'");
  return in;
}

} // namespace

std::vector<std::vector<double>> read_csv(std::istream &in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto content = trim(line);
    if (content.empty())
      continue;
    std::vector<double> row;
    std::string_view rest = content;
    for (;;) {
      const auto comma = rest.find(',');
      row.push_back(parse_real(rest.substr(0, comma), number));
      if (comma == std::string_view::npos)
        break;
      rest = rest.substr(comma + 1);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(number, "row has " + std::to_string(row.size()) + " values, expected " +
                                   std::to_string(rows.front().size()));
    rows.push_back(std::move(row));
  }
  if (rows.empty())
    throw ParseError(number == 0 ? 1 : number, "no data rows");
  return rows;
}

DenseOperator read_matrix_csv(std::istream &in) {
  const auto rows = read_csv(in);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return DenseOperator(std::move(m));
}

Vector read_vector_csv(std::istream &in) {
  const auto rows = read_csv(in);
  if (rows.size() == 1)
    return Eigen::Map<const Vector>(rows.front().data(),
                                    static_cast<Eigen::Index>(rows.front().size()));
  if (rows.front().size() != 1)
    throw ParseError(1, "a vector must be a single row or a single column");
  Vector v(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = rows[i][0];
  return v;
}

EmpiricalDistribution read_distribution_csv(std::istream &in) {
  const auto rows = read_csv(in);
  if (rows.front().size() != 2)
    throw ParseError(1, "distribution rows must be 'location,weight'");
  std::vector<Atom> atoms;
  atoms.reserve(rows.size());
  for (const auto &row : rows)
    atoms.push_back({row[0], row[1]});
  return EmpiricalDistribution::normalized(std::move(atoms));
}

DenseOperator read_matrix_file(const std::filesystem::path &path) {
  auto in = open(path);
  return read_matrix_csv(in);
}

Vector read_vector_file(const std::filesystem::path &path) {
  auto in = open(path);
  return read_vector_csv(in);
}

EmpiricalDistribution read_distribution_file(const std::filesystem::path &path) {
  auto in = open(path);
  return read_distribution_csv(in);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_csv(std::ostream &out, const std::vector<std::string> &header,
               const std::vector<Vector> &columns) {
  if (!header.empty()) {
    for (std::size_t j = 0; j < header.size(); ++j)
      out << (j ? "," : "") << header[j];
    out << '\n';
  }
  if (columns.empty())
    return;
  const auto rows = columns.front().size();
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << format_double(columns[j](i));
    out << '\n';
  }
}

JsonObject &JsonObject::set(std::string key, JsonValue value) {
  for (auto &entry : entries_) {
    if (entry.first == key) {
      entry.second = std::move(value);
      return *this;
    }
  }
  entries_.emplace_back(std::move(key), std::move(value));
  return *this;
}

JsonObject &JsonObject::set(std::string key, const Vector &values) {
  return set(std::move(key), JsonValue(std::vector<double>(values.begin(), values.end())));
}

const JsonValue *JsonObject::find(const std::string &key) const {
  for (const auto &entry : entries_) {
    if (entry.first == key)
      return &entry.second;
  }
  return nullptr;
}

namespace {

void write_string(std::ostringstream &out, const std::string &s) {
  out << '"';
  for (char c : s) {
    switch (c) {
    case '"':
      out << "\\\"";
      break;
    case '\\':
      out << "\\\\";
      break;
    case '\n':
      out << "\\n";
      break;
    case '\t':
      out << "\\t";
      break;
    default:
      if (static_cast<unsigned char>(c) < 0x20) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "\\u%04x", c);
        out << buf;
      } else {
        out << c;
      }
    }
  }
  out << '"';
}

void write_number(std::ostringstream &out, double v) {
  if (std::isfinite(v))
    out << format_double(v);
  else
    out << "null";
}

} // namespace

std::string JsonObject::dump() const {
  std::ostringstream out;
  out << '{';
  bool first = true;
  for (const auto &[key, value] : entries_) {
    out << (first ? "" : ",") << "\n  ";
    first = false;
    write_string(out, key);
    out << ": ";
    std::visit(
        [&](const auto &v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, Null>) {
            out << "null";
          } else if constexpr (std::is_same_v<T, bool>) {
            out << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::int64_t>) {
            out << v;
          } else if constexpr (std::is_same_v<T, double>) {
            write_number(out, v);
          } else if constexpr (std::is_same_v<T, std::string>) {
            write_string(out, v);
          } else {
            out << '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
              if (i)
                out << ", ";
              write_number(out, v[i]);
            }
            out << ']';
          }
        },
        value);
  }
  out << (first ? "}" : "\n}");
  return out.str();
}

} // namespace estimability::io
