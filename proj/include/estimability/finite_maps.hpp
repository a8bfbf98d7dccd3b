#pragma once

// Total functions between finite index sets {0..n-1} -> {0..m-1}, and
// brute-force checks of identifiability, generalized inverses and
// Fisher consistency on them.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace estimability {

class FiniteMap {
public:
  /// Throws InvalidInput if a size is zero, the table length differs from
  /// domain_size, or an entry is outside [0, codomain_size).
  FiniteMap(std::size_t domain_size, std::size_t codomain_size,
            std::vector<std::size_t> table);

  static FiniteMap identity(std::size_t n);

  std::size_t domain_size() const noexcept { return table_.size(); }
  std::size_t codomain_size() const noexcept { return codomain_size_; }
  const std::vector<std::size_t> &table() const noexcept { return table_; }

  std::size_t operator()(std::size_t i) const { return table_.at(i); }

  friend bool operator==(const FiniteMap &, const FiniteMap &) = default;

private:
  std::size_t codomain_size_;
  std::vector<std::size_t> table_;
};

/// outer ∘ inner. Throws CompositionError unless inner's codomain is outer's domain.
FiniteMap compose(const FiniteMap &outer, const FiniteMap &inner);

/// Text form `domain_size codomain_size : t0,t1,...`.
FiniteMap parse_finite_map(std::string_view text);
std::string format_finite_map(const FiniteMap &map);

bool is_injective(const FiniteMap &map);
bool is_surjective(const FiniteMap &map);
bool is_idempotent(const FiniteMap &map);

/// The same map with its codomain relabelled onto its range, preserving order.
FiniteMap restrict_to_range(const FiniteMap &map);

/// G with P∘G∘P = P. Each codomain point goes to its smallest preimage, or to
/// domain index 0 when it has none.
FiniteMap construct_inner_inverse(const FiniteMap &p);

bool verify_inner_inverse(const FiniteMap &p, const FiniteMap &g);
bool verify_outer_inverse(const FiniteMap &p, const FiniteMap &g);

/// G∘P∘G, which is both an inner and an outer inverse whenever G is an inner
/// inverse. Throws InvalidInput if G is not an inner inverse of P.
FiniteMap promote_to_generalized(const FiniteMap &p, const FiniteMap &g);

/// Some T with T∘P = identity, present exactly when P is injective.
std::optional<FiniteMap> fisher_consistent_estimator(const FiniteMap &p);

/// q is constant on every fibre of P.
bool parameter_identifiable_standard(const FiniteMap &p, const FiniteMap &q);

/// All s with q∘s = identity. q must be surjective (see restrict_to_range).
/// Sections are listed in lexicographic order of their tables.
std::vector<FiniteMap> enumerate_sections(const FiniteMap &q);

/// For every section s of q, P∘s∘q separates whatever s∘q separates.
bool parameter_identifiable_sections(const FiniteMap &p, const FiniteMap &q);

/// Every table with the given sizes, in lexicographic order.
std::vector<FiniteMap> all_maps(std::size_t domain_size, std::size_t codomain_size);

struct EquivalenceCheckReport {
  std::size_t max_domain = 0;
  std::size_t max_codomain = 0;
  std::size_t fisher_maps_checked = 0;
  std::size_t fisher_counterexamples = 0;
  std::size_t parameter_pairs_checked = 0;
  std::size_t parameter_disagreements = 0;
  std::size_t generalized_inverse_failures = 0;

  std::size_t counterexamples() const noexcept {
    return fisher_counterexamples + parameter_disagreements + generalized_inverse_failures;
  }
};

/// Exhaustive check over every map with 1 ≤ domain ≤ max_domain and
/// 1 ≤ codomain ≤ max_codomain:
///  - a Fisher-consistent estimator exists iff the map is injective, and it
///    is a left inverse when it exists;
///  - the constructed inner inverse, promoted, is both inner and outer;
///  - the standard and section-based parameter identifiability tests agree
///    on every (P, q) pair sharing a domain (q restricted to its range).
EquivalenceCheckReport run_equivalence_checks(std::size_t max_domain, std::size_t max_codomain);

} // namespace estimability
