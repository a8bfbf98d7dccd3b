#include "estimability/finite_maps.hpp"

#include "estimability/errors.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

namespace estimability {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::size_t parse_index(std::string_view token, const char *what) {
  token = trim(token);
  std::size_t value = 0;
  const auto *end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end)
    throw ParseError(1, std::string("expected a nonnegative integer for ") + what + ", got '" +
                            std::string(token) + "'");
  return value;
}

// Odometer step over tables in lexicographic order; false once exhausted.
bool next_table(std::vector<std::size_t> &table, std::size_t codomain_size) {
  for (std::size_t i = table.size(); i-- > 0;) {
    if (++table[i] < codomain_size)
      return true;
    table[i] = 0;
  }
  return false;
}

} // namespace

FiniteMap::FiniteMap(std::size_t domain_size, std::size_t codomain_size,
                     std::vector<std::size_t> table)
    : codomain_size_(codomain_size), table_(std::move(table)) {
  if (domain_size == 0 || codomain_size == 0)
    throw InvalidInput("finite map sizes must be positive");
  if (table_.size() != domain_size)
    throw InvalidInput("finite map table has " + std::to_string(table_.size()) +
                       " entries, expected " + std::to_string(domain_size));
  for (std::size_t i = 0; i < table_.size(); ++i) {
    if (table_[i] >= codomain_size)
      throw InvalidInput("finite map entry " + std::to_string(i) + " = " +
                         std::to_string(table_[i]) + " is outside codomain of size " +
                         std::to_string(codomain_size));
  }
}

FiniteMap FiniteMap::identity(std::size_t n) {
  std::vector<std::size_t> table(n);
  std::iota(table.begin(), table.end(), std::size_t{0});
  return FiniteMap(n, n, std::move(table));
}

FiniteMap compose(const FiniteMap &outer, const FiniteMap &inner) {
  if (inner.codomain_size() != outer.domain_size())
    throw CompositionError("cannot compose: inner codomain size " +
                           std::to_string(inner.codomain_size()) + " != outer domain size " +
                           std::to_string(outer.domain_size()));
  std::vector<std::size_t> table(inner.domain_size());
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i] = outer.table()[inner.table()[i]];
  return FiniteMap(inner.domain_size(), outer.codomain_size(), std::move(table));
}

FiniteMap parse_finite_map(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw ParseError(1, "finite map must look like 'domain codomain : t0,t1,...'");
  const auto header = trim(text.substr(0, colon));
  const auto space = header.find_first_of(" \t");
  if (space == std::string_view::npos)
    throw ParseError(1, "finite map header needs domain and codomain sizes");
  const auto domain = parse_index(header.substr(0, space), "domain size");
  const auto codomain = parse_index(header.substr(space + 1), "codomain size");

  std::vector<std::size_t> table;
  auto body = trim(text.substr(colon + 1));
  while (!body.empty()) {
    const auto comma = body.find(',');
    table.push_back(parse_index(body.substr(0, comma), "table entry"));
    if (comma == std::string_view::npos)
      break;
    body = body.substr(comma + 1);
  }
  try {
    return FiniteMap(domain, codomain, std::move(table));
  } catch (const ParseError &) {
    throw;
  } catch (const InvalidInput &e) {
    throw ParseError(1, e.what());
  }
}

std::string format_finite_map(const FiniteMap &map) {
  std::string out = std::to_string(map.domain_size()) + " " + std::to_string(map.codomain_size()) + " : ";
  for (std::size_t i = 0; i < map.domain_size(); ++i) {
    if (i > 0)
      out += ',';
    out += std::to_string(map.table()[i]);
  }
  return out;
}

bool is_injective(const FiniteMap &map) {
  std::vector<bool> hit(map.codomain_size(), false);
  for (auto image : map.table()) {
    if (hit[image])
      return false;
    hit[image] = true;
  }
  return true;
}

bool is_surjective(const FiniteMap &map) {
  std::vector<bool> hit(map.codomain_size(), false);
  for (auto image : map.table())
    hit[image] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool is_idempotent(const FiniteMap &map) {
  if (map.domain_size() != map.codomain_size())
    return false;
  return compose(map, map) == map;
}

FiniteMap restrict_to_range(const FiniteMap &map) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> relabel(map.codomain_size(), unset);
  for (auto image : map.table())
    relabel[image] = 0;
  std::size_t next = 0;
  for (auto &label : relabel) {
    if (label != unset)
      label = next++;
  }
  std::vector<std::size_t> table(map.domain_size());
  for (std::size_t i = 0; i < table.size(); ++i)
    table[i] = relabel[map.table()[i]];
  return FiniteMap(map.domain_size(), next, std::move(table));
}

FiniteMap construct_inner_inverse(const FiniteMap &p) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> table(p.codomain_size(), unset);
  for (std::size_t i = 0; i < p.domain_size(); ++i) {
    auto &slot = table[p.table()[i]];
    if (slot == unset)
      slot = i;
  }
  std::replace(table.begin(), table.end(), unset, std::size_t{0});
  return FiniteMap(p.codomain_size(), p.domain_size(), std::move(table));
}

bool verify_inner_inverse(const FiniteMap &p, const FiniteMap &g) {
  return compose(p, compose(g, p)) == p;
}

bool verify_outer_inverse(const FiniteMap &p, const FiniteMap &g) {
  return compose(g, compose(p, g)) == g;
}

FiniteMap promote_to_generalized(const FiniteMap &p, const FiniteMap &g) {
  if (!verify_inner_inverse(p, g))
    throw InvalidInput("promote_to_generalized requires an inner inverse (P∘G∘P = P fails)");
  return compose(g, compose(p, g));
}

std::optional<FiniteMap> fisher_consistent_estimator(const FiniteMap &p) {
  if (!is_injective(p))
    return std::nullopt;
  // On an injective map the inner inverse is a left inverse.
  return construct_inner_inverse(p);
}

bool parameter_identifiable_standard(const FiniteMap &p, const FiniteMap &q) {
  if (p.domain_size() != q.domain_size())
    throw InvalidInput("P and q must share a domain");
  const auto n = p.domain_size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (p(a) == p(b) && q(a) != q(b))
        return false;
    }
  }
  return true;
}

std::vector<FiniteMap> enumerate_sections(const FiniteMap &q) {
  if (!is_surjective(q))
    throw InvalidInput("enumerate_sections needs a surjective q; restrict its codomain to the "
                       "range first (restrict_to_range)");
  std::vector<std::vector<std::size_t>> fibres(q.codomain_size());
  for (std::size_t i = 0; i < q.domain_size(); ++i)
    fibres[q(i)].push_back(i);

  std::vector<FiniteMap> sections;
  std::vector<std::size_t> choice(q.codomain_size(), 0);
  for (;;) {
    std::vector<std::size_t> table(q.codomain_size());
    for (std::size_t v = 0; v < table.size(); ++v)
      table[v] = fibres[v][choice[v]];
    sections.emplace_back(q.codomain_size(), q.domain_size(), std::move(table));

    std::size_t v = choice.size();
    while (v-- > 0) {
      if (++choice[v] < fibres[v].size())
        break;
      choice[v] = 0;
    }
    if (v == static_cast<std::size_t>(-1))
      break;
  }
  return sections;
}

namespace {

bool sections_condition(const FiniteMap &p, const FiniteMap &q,
                        const std::vector<FiniteMap> &sections) {
  const auto n = p.domain_size();
  for (const auto &s : sections) {
    const auto representative = compose(s, q);
    const auto observed = compose(p, representative);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (observed(a) == observed(b) && representative(a) != representative(b))
          return false;
      }
    }
  }
  return true;
}

} // namespace

bool parameter_identifiable_sections(const FiniteMap &p, const FiniteMap &q) {
  if (p.domain_size() != q.domain_size())
    throw InvalidInput("P and q must share a domain");
  return sections_condition(p, q, enumerate_sections(q));
}

std::vector<FiniteMap> all_maps(std::size_t domain_size, std::size_t codomain_size) {
  std::vector<FiniteMap> maps;
  std::vector<std::size_t> table(domain_size, 0);
  do {
    maps.emplace_back(domain_size, codomain_size, table);
  } while (next_table(table, codomain_size));
  return maps;
}

EquivalenceCheckReport run_equivalence_checks(std::size_t max_domain, std::size_t max_codomain) {
  EquivalenceCheckReport report;
  report.max_domain = max_domain;
  report.max_codomain = max_codomain;

  for (std::size_t d = 1; d <= max_domain; ++d) {
    std::vector<FiniteMap> maps;
    for (std::size_t c = 1; c <= max_codomain; ++c) {
      auto batch = all_maps(d, c);
      maps.insert(maps.end(), std::make_move_iterator(batch.begin()),
                  std::make_move_iterator(batch.end()));
    }

    const auto identity = FiniteMap::identity(d);
    for (const auto &p : maps) {
      ++report.fisher_maps_checked;
      const auto t = fisher_consistent_estimator(p);
      const bool consistent = t.has_value() && compose(*t, p) == identity;
      if (consistent != is_injective(p) || (t.has_value() && !consistent))
        ++report.fisher_counterexamples;

      const auto g = promote_to_generalized(p, construct_inner_inverse(p));
      if (!verify_inner_inverse(p, g) || !verify_outer_inverse(p, g))
        ++report.generalized_inverse_failures;
    }

    struct Parameter {
      FiniteMap q;
      std::vector<FiniteMap> sections;
    };
    std::vector<Parameter> parameters;
    parameters.reserve(maps.size());
    for (const auto &q : maps) {
      auto restricted = restrict_to_range(q);
      auto sections = enumerate_sections(restricted);
      parameters.push_back({std::move(restricted), std::move(sections)});
    }

    for (const auto &p : maps) {
      for (const auto &param : parameters) {
        ++report.parameter_pairs_checked;
        if (parameter_identifiable_standard(p, param.q) !=
            sections_condition(p, param.q, param.sections))
          ++report.parameter_disagreements;
      }
    }
  }
  return report;
}

} // namespace estimability
