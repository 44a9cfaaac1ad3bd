#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vqcount {

/// Assignments are packed into 64-bit words, variable i at bit i.
inline constexpr std::size_t kMaxVariables = 64;

enum class Semantics { NotAllEqual, ExactlyOne };

std::string to_string(Semantics s);
Semantics semantics_from_string(const std::string& text);

using Clause = std::array<std::uint32_t, 3>;

/// Full assignment of n variables.
class Assignment {
 public:
  Assignment() = default;
  Assignment(std::size_t n_bits, std::uint64_t bits);
  static Assignment from_bits(const std::vector<int>& bits);

  std::size_t size() const noexcept { return n_bits_; }
  std::uint64_t bits() const noexcept { return bits_; }
  bool operator[](std::size_t i) const { return (bits_ >> i) & 1U; }

  bool operator==(const Assignment&) const = default;

 private:
  std::size_t n_bits_ = 0;
  std::uint64_t bits_ = 0;
};

/// Positive-literal 3-clause formula with NAE or exactly-one clause semantics,
/// plus the partial assignment accumulated by self-reduction. Pinned bits are
/// kept alongside the clause list; evaluation substitutes them on the fly.
class Formula {
 public:
  Formula(std::size_t n_vars, std::vector<Clause> clauses, Semantics semantics);

  std::size_t n_vars() const noexcept { return n_vars_; }
  std::size_t n_clauses() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  Semantics semantics() const noexcept { return semantics_; }
  double alpha() const;

  bool is_pinned(std::size_t var) const;
  std::optional<bool> pinned_bit(std::size_t var) const;
  std::size_t n_pinned() const;
  std::uint64_t pinned_mask() const noexcept { return pinned_mask_; }
  std::uint64_t pinned_values() const noexcept { return pinned_values_; }

  /// Unpinned variables in ascending order. Self-reduction fixes the front.
  std::vector<std::uint32_t> free_vars() const;
  std::optional<std::uint32_t> next_free_var() const;

  /// Copy of this formula with `var` pinned to `bit`.
  Formula fix_variable(std::size_t var, bool bit) const;
  /// Same clauses with every pin dropped.
  Formula without_pins() const;

  /// Clause check on a packed assignment; pins are not consulted.
  bool clauses_satisfied(std::uint64_t bits) const noexcept;
  /// Solution of the reduced formula: pins honored and all clauses satisfied.
  bool satisfied_by(std::uint64_t bits) const noexcept;

  /// Packs a configuration of the free variables (bit j <-> free_vars()[j])
  /// together with the pinned bits into a full assignment.
  std::uint64_t expand(std::uint64_t free_config) const noexcept;

  bool operator==(const Formula&) const = default;

 private:
  std::size_t n_vars_;
  std::vector<Clause> clauses_;
  Semantics semantics_;
  std::uint64_t pinned_mask_ = 0;
  std::uint64_t pinned_values_ = 0;
};

/// True iff `a` is a solution of `f` (pins included). Throws InputError when
/// the assignment length differs from the variable count.
bool evaluate(const Formula& f, const Assignment& a);

Formula fix_variable(const Formula& f, std::size_t var, bool bit);

/// Instance file text:
///   p vqc <nae|one3> <n_vars> <n_clauses>
///   <i> <j> <k>          (one line per clause, 0-based)
///   a <var> <bit>        (optional pins)
Formula parse_instance(std::istream& in);
Formula read_instance(const std::filesystem::path& path);
void write_instance(const Formula& f, std::ostream& out);
void write_instance(const Formula& f, const std::filesystem::path& path);
std::string instance_text(const Formula& f);

/// FNV-1a of the canonical instance text.
std::uint64_t instance_hash(const Formula& f);

std::uint64_t fnv1a(std::string_view text) noexcept;
std::string hex64(std::uint64_t value);

}  // namespace vqcount
