#include "vqcount/formula.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "vqcount/errors.hpp"

namespace vqcount {

std::string to_string(Semantics s) {
  return s == Semantics::NotAllEqual ? "nae" : "one3";
}

Semantics semantics_from_string(const std::string& text) {
  if (text == "nae") return Semantics::NotAllEqual;
  if (text == "one3") return Semantics::ExactlyOne;
  throw InputError("unknown clause semantics '" + text + "' (expected nae or one3)");
}

Assignment::Assignment(std::size_t n_bits, std::uint64_t bits) : n_bits_(n_bits), bits_(bits) {
  if (n_bits > kMaxVariables) throw InputError("assignment longer than 64 bits");
  if (n_bits < kMaxVariables && (bits >> n_bits) != 0) {
    throw InputError("assignment has bits set beyond its length");
  }
}

Assignment Assignment::from_bits(const std::vector<int>& bits) {
  if (bits.size() > kMaxVariables) throw InputError("assignment longer than 64 bits");
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != 0 && bits[i] != 1) throw InputError("assignment bits must be 0 or 1");
    packed |= static_cast<std::uint64_t>(bits[i]) << i;
  }
  return Assignment(bits.size(), packed);
}

Formula::Formula(std::size_t n_vars, std::vector<Clause> clauses, Semantics semantics)
    : n_vars_(n_vars), clauses_(std::move(clauses)), semantics_(semantics) {
  if (n_vars_ == 0) throw InputError("formula needs at least one variable");
  if (n_vars_ > kMaxVariables) throw InputError("formula has more than 64 variables");
  for (const Clause& c : clauses_) {
    for (std::uint32_t v : c) {
      if (v >= n_vars_) {
        throw InputError("clause variable " + std::to_string(v) + " out of range");
      }
    }
    if (c[0] == c[1] || c[0] == c[2] || c[1] == c[2]) {
      throw InputError("clause repeats a variable");
    }
  }
}

double Formula::alpha() const {
  return static_cast<double>(clauses_.size()) / static_cast<double>(n_vars_);
}

bool Formula::is_pinned(std::size_t var) const {
  if (var >= n_vars_) throw InputError("variable index out of range");
  return (pinned_mask_ >> var) & 1U;
}

std::optional<bool> Formula::pinned_bit(std::size_t var) const {
  if (!is_pinned(var)) return std::nullopt;
  return ((pinned_values_ >> var) & 1U) != 0;
}

std::size_t Formula::n_pinned() const { return std::popcount(pinned_mask_); }

std::vector<std::uint32_t> Formula::free_vars() const {
  std::vector<std::uint32_t> out;
  out.reserve(n_vars_ - n_pinned());
  for (std::uint32_t v = 0; v < n_vars_; ++v) {
    if (!((pinned_mask_ >> v) & 1U)) out.push_back(v);
  }
  return out;
}

std::optional<std::uint32_t> Formula::next_free_var() const {
  for (std::uint32_t v = 0; v < n_vars_; ++v) {
    if (!((pinned_mask_ >> v) & 1U)) return v;
  }
  return std::nullopt;
}

Formula Formula::fix_variable(std::size_t var, bool bit) const {
  if (is_pinned(var)) {
    throw InputError("variable " + std::to_string(var) + " is already fixed");
  }
  Formula out = *this;
  out.pinned_mask_ |= std::uint64_t{1} << var;
  if (bit) out.pinned_values_ |= std::uint64_t{1} << var;
  return out;
}

Formula Formula::without_pins() const {
  Formula out = *this;
  out.pinned_mask_ = 0;
  out.pinned_values_ = 0;
  return out;
}

bool Formula::clauses_satisfied(std::uint64_t bits) const noexcept {
  if (semantics_ == Semantics::NotAllEqual) {
    for (const Clause& c : clauses_) {
      const unsigned ones = ((bits >> c[0]) & 1U) + ((bits >> c[1]) & 1U) + ((bits >> c[2]) & 1U);
      if (ones == 0 || ones == 3) return false;
    }
  } else {
    for (const Clause& c : clauses_) {
      const unsigned ones = ((bits >> c[0]) & 1U) + ((bits >> c[1]) & 1U) + ((bits >> c[2]) & 1U);
      if (ones != 1) return false;
    }
  }
  return true;
}

bool Formula::satisfied_by(std::uint64_t bits) const noexcept {
  if ((bits & pinned_mask_) != pinned_values_) return false;
  return clauses_satisfied(bits);
}

std::uint64_t Formula::expand(std::uint64_t free_config) const noexcept {
  std::uint64_t out = pinned_values_;
  std::uint64_t free = ~pinned_mask_;
  if (n_vars_ < 64) free &= (std::uint64_t{1} << n_vars_) - 1;
  while (free != 0 && free_config != 0) {
    const std::uint64_t lowest = free & (~free + 1);
    if (free_config & 1U) out |= lowest;
    free_config >>= 1;
    free &= free - 1;
  }
  return out;
}

bool evaluate(const Formula& f, const Assignment& a) {
  if (a.size() != f.n_vars()) {
    throw InputError("assignment has " + std::to_string(a.size()) + " bits, formula has " +
                     std::to_string(f.n_vars()) + " variables");
  }
  return f.satisfied_by(a.bits());
}

Formula fix_variable(const Formula& f, std::size_t var, bool bit) {
  return f.fix_variable(var, bit);
}

namespace {

// Parses a non-negative decimal integer token; rejects signs and junk.
std::uint64_t parse_index(const std::string& token, std::size_t line, const char* what) {
  if (token.empty()) throw ParseError(std::string("missing ") + what, line);
  if (token[0] == '-') throw ParseError(std::string("negative literal in ") + what, line);
  std::uint64_t value = 0;
  for (char ch : token) {
    if (ch < '0' || ch > '9') throw ParseError(std::string("malformed ") + what + " '" + token + "'", line);
    value = value * 10 + static_cast<std::uint64_t>(ch - '0');
    if (value > (std::uint64_t{1} << 40)) throw ParseError(std::string(what) + " too large", line);
  }
  return value;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string token;
  while (in >> token) out.push_back(token);
  return out;
}

}  // namespace

Formula parse_instance(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<Formula> formula;
  std::size_t declared_vars = 0;
  std::size_t declared_clauses = 0;
  Semantics semantics = Semantics::NotAllEqual;
  std::vector<Clause> clauses;
  std::vector<std::pair<std::uint64_t, bool>> pins;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens[0] == "c") continue;

    if (!have_header) {
      if (tokens.size() != 5 || tokens[0] != "p" || tokens[1] != "vqc") {
        throw ParseError("malformed header, expected 'p vqc <nae|one3> <n_vars> <n_clauses>'",
                         line_no);
      }
      if (tokens[2] != "nae" && tokens[2] != "one3") {
        throw ParseError("unknown semantics '" + tokens[2] + "'", line_no);
      }
      semantics = semantics_from_string(tokens[2]);
      declared_vars = parse_index(tokens[3], line_no, "variable count");
      declared_clauses = parse_index(tokens[4], line_no, "clause count");
      if (declared_vars == 0 || declared_vars > kMaxVariables) {
        throw ParseError("variable count must be in [1, 64]", line_no);
      }
      have_header = true;
      continue;
    }

    if (tokens[0] == "a") {
      if (tokens.size() != 3) throw ParseError("pin line must be 'a <var> <bit>'", line_no);
      const auto var = parse_index(tokens[1], line_no, "pinned variable");
      const auto bit = parse_index(tokens[2], line_no, "pinned bit");
      if (var >= declared_vars) throw ParseError("pinned variable out of range", line_no);
      if (bit > 1) throw ParseError("pinned bit must be 0 or 1", line_no);
      for (const auto& [v, b] : pins) {
        if (v == var) throw ParseError("variable pinned twice", line_no);
      }
      pins.emplace_back(var, bit == 1);
      continue;
    }

    if (!pins.empty()) throw ParseError("clause after pin lines", line_no);
    if (tokens.size() != 3) throw ParseError("clause line must hold three indices", line_no);
    Clause clause{};
    for (std::size_t i = 0; i < 3; ++i) {
      const auto v = parse_index(tokens[i], line_no, "clause variable");
      if (v >= declared_vars) {
        throw ParseError("clause variable " + tokens[i] + " out of range", line_no);
      }
      clause[i] = static_cast<std::uint32_t>(v);
    }
    if (clause[0] == clause[1] || clause[0] == clause[2] || clause[1] == clause[2]) {
      throw ParseError("clause repeats a variable", line_no);
    }
    clauses.push_back(clause);
  }

  if (!have_header) throw ParseError("missing header");
  if (clauses.size() != declared_clauses) {
    throw ParseError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                     std::to_string(clauses.size()));
  }
  Formula f(declared_vars, std::move(clauses), semantics);
  for (const auto& [v, b] : pins) f = f.fix_variable(v, b);
  return f;
}

Formula read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file " + path.string());
  return parse_instance(in);
}

void write_instance(const Formula& f, std::ostream& out) { out << instance_text(f); }

void write_instance(const Formula& f, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write instance file " + path.string());
  write_instance(f, out);
}

std::string instance_text(const Formula& f) {
  std::string text = "p vqc " + to_string(f.semantics()) + " " + std::to_string(f.n_vars()) + " " +
                     std::to_string(f.n_clauses()) + "\n";
  for (const Clause& c : f.clauses()) {
    text += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + "\n";
  }
  for (std::size_t v = 0; v < f.n_vars(); ++v) {
    if (auto bit = f.pinned_bit(v)) {
      text += "a " + std::to_string(v) + " " + (*bit ? "1" : "0") + "\n";
    }
  }
  return text;
}

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::uint64_t instance_hash(const Formula& f) { return fnv1a(instance_text(f)); }

}  // namespace vqcount
