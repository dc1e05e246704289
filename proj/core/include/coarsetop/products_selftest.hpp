#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace coarsetop {

// One identity swept over many instances. `witness` describes the first
// failing instance, empty when none failed.
struct IdentityCheck {
  std::string group;
  std::string name;
  std::string ring;
  std::size_t instances = 0;
  std::size_t failures = 0;
  std::string witness;

  bool passed() const { return instances > 0 && failures == 0; }
};

nlohmann::json to_json(const IdentityCheck& check);

struct AlgebraBatteryOptions {
  std::uint64_t seed = 7;
  std::size_t instances = 10'000;  // per identity and ring
  std::size_t symbols = 8;
  int maxdim = 3;
};

// ∂∂ = 0, dd = 0, evaluation adjunction, prism and transposition homotopies,
// over ℤ and GF(2).
std::vector<IdentityCheck> run_algebra_battery(const AlgebraBatteryOptions& options);

// Chain-map properties of A, S and the diagonal, S T = T S, T T = id, Leibniz
// rules, the cap boundary formula, the slant sign rule and cap/slant support.
std::vector<IdentityCheck> run_chain_map_battery(const AlgebraBatteryOptions& options);

struct SlantBatteryOptions {
  std::uint64_t seed = 7;
  int exhaustive_max = 2;      // bidegrees k, l ≤ this
  std::size_t exhaustive_symbols = 5;
  std::size_t random_instances = 1000;
  int random_max = 4;
  std::size_t random_symbols = 8;
};

// The three cup/cap/slant interaction identities, exhaustively at small
// bidegree and on random larger instances.
std::vector<IdentityCheck> run_slant_battery(const SlantBatteryOptions& options);

// ε and ε′ sequences against their closed forms.
std::vector<IdentityCheck> sign_sequence_checks(int max_n = 16);

// The two composite sign identities for 0 ≤ k ≤ n ≤ max_n, as stated, plus the
// corrected form of the first.
struct SignIdentityRow {
  int n = 0;
  int k = 0;
  int lhs = 0;
  int rhs = 0;
};
struct SignIdentityTable {
  std::string name;
  std::string statement;
  std::vector<SignIdentityRow> rows;
  std::size_t failures() const;
};
std::vector<SignIdentityTable> sign_identity_tables(int max_n = 8);
nlohmann::json to_json(const SignIdentityTable& table);

// A∘S against the identity on σ⊗τ, and the acyclic-models homotopy when they
// differ.
struct AsBranchOptions {
  int max_degree = 3;
  std::size_t symbols = 5;
  std::size_t direct_samples = 2000;
  std::uint64_t seed = 7;
};
struct AsBranchReport {
  std::size_t generators = 0;     // all σ⊗τ with k, l ≤ max_degree
  std::size_t patterns = 0;       // generators up to relabelling of symbols
  std::size_t discrepancies = 0;  // generators with A S (σ⊗τ) ≠ σ⊗τ
  std::string discrepancy_witness;
  std::string branch;             // "identity" or "homotopy"
  std::size_t solved = 0;         // memoized homotopy entries
  std::size_t verified_patterns = 0;
  std::size_t residual_failures = 0;
  std::size_t direct_samples = 0;
  std::size_t direct_failures = 0;
  std::string residual_witness;
  bool verified() const {
    return residual_failures == 0 && direct_failures == 0 && verified_patterns == patterns;
  }
};
AsBranchReport run_as_branch(const AsBranchOptions& options);
nlohmann::json to_json(const AsBranchReport& report);

// S∘A against the identity on X×X generators; always solved by the cone
// contraction. Reported as an IdentityCheck over generators.
IdentityCheck run_sa_homotopy(int max_degree = 3, std::size_t symbols = 3);

struct ProductsSelftestOptions {
  std::uint64_t seed = 7;
  int maxdim = 3;
  std::size_t instances = 10'000;
};
struct ProductsSelftestReport {
  ProductsSelftestOptions options;
  std::vector<IdentityCheck> checks;
  AsBranchReport as_branch;
  bool all_passed() const;
};
ProductsSelftestReport run_products_selftest(const ProductsSelftestOptions& options);
nlohmann::json to_json(const ProductsSelftestReport& report);

}  // namespace coarsetop
