#pragma once

// Ordinals below w^w in Cantor normal form. These serve as clock values and
// clock bounds; only the operations the semantics needs are provided
// (comparison, successor/predecessor, classification).

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mucalc/error.hpp"

namespace mucalc {

enum class OrdinalKind { zero, successor, limit };

class Ordinal {
 public:
  // One summand w^exponent * coefficient.
  struct Term {
    std::uint32_t exponent = 0;
    std::uint64_t coefficient = 1;

    friend bool operator==(const Term&, const Term&) = default;
  };

  Ordinal() = default;

  explicit Ordinal(std::uint64_t n) {
    if (n > 0) terms_.push_back({0, n});
  }

  static Ordinal omega() { return from_terms({{1, 1}}); }

  // Terms must have strictly decreasing exponents and nonzero coefficients.
  static Ordinal from_terms(std::vector<Term> terms) {
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].coefficient == 0)
        throw InvalidArgument("ordinal term with zero coefficient");
      if (i > 0 && terms[i].exponent >= terms[i - 1].exponent)
        throw InvalidArgument("ordinal exponents must strictly decrease");
    }
    Ordinal o;
    o.terms_ = std::move(terms);
    return o;
  }

  const std::vector<Term>& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_finite() const noexcept { return terms_.empty() || terms_.front().exponent == 0; }

  OrdinalKind kind() const noexcept {
    if (terms_.empty()) return OrdinalKind::zero;
    return terms_.back().exponent == 0 ? OrdinalKind::successor : OrdinalKind::limit;
  }

  std::optional<std::uint64_t> to_finite() const noexcept {
    if (terms_.empty()) return 0;
    if (!is_finite()) return std::nullopt;
    return terms_.front().coefficient;
  }

  Ordinal successor() const {
    Ordinal o = *this;
    if (!o.terms_.empty() && o.terms_.back().exponent == 0)
      ++o.terms_.back().coefficient;
    else
      o.terms_.push_back({0, 1});
    return o;
  }

  // The b with b+1 == *this.
  Ordinal predecessor() const {
    if (kind() != OrdinalKind::successor)
      throw InvalidArgument("predecessor of " + to_string() + " is undefined");
    Ordinal o = *this;
    if (--o.terms_.back().coefficient == 0) o.terms_.pop_back();
    return o;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const Term& t : terms_) {
      if (!out.empty()) out += '+';
      if (t.exponent == 0) {
        out += std::to_string(t.coefficient);
        continue;
      }
      out += 'w';
      if (t.exponent > 1) out += '^' + std::to_string(t.exponent);
      if (t.coefficient > 1) out += '*' + std::to_string(t.coefficient);
    }
    return out;
  }

  // Syntax: term ("+" term)*, term = "w^"K["*"C] | "w"["*"C] | C.
  static Ordinal parse(std::string_view text);

  friend bool operator==(const Ordinal&, const Ordinal&) = default;

  // CNF comparison: lexicographic over terms, a term with a larger exponent
  // dominates, and a proper prefix is smaller.
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
    const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
    for (std::size_t i = 0; i < n; ++i) {
      const Term& x = a.terms_[i];
      const Term& y = b.terms_[i];
      if (x.exponent != y.exponent) return x.exponent <=> y.exponent;
      if (x.coefficient != y.coefficient) return x.coefficient <=> y.coefficient;
    }
    return a.terms_.size() <=> b.terms_.size();
  }

 private:
  std::vector<Term> terms_;
};

inline Ordinal parse_ordinal(std::string_view text) { return Ordinal::parse(text); }
inline std::string print_ordinal(const Ordinal& o) { return o.to_string(); }

namespace detail {

class OrdinalScanner {
 public:
  explicit OrdinalScanner(std::string_view text) : text_(text) {}

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  bool at_end() {
    skip_space();
    return pos_ == text_.size();
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::uint64_t natural() {
    skip_space();
    const std::size_t start = pos_;
    std::uint64_t value = 0;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
      const auto digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > (UINT64_MAX - digit) / 10) throw ParseError("ordinal numeral overflows", start);
      value = value * 10 + digit;
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected a natural number", pos_);
    return value;
  }

  std::size_t pos() const noexcept { return pos_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Ordinal Ordinal::parse(std::string_view text) {
  detail::OrdinalScanner in(text);
  std::vector<Term> terms;
  if (in.at_end()) throw ParseError("empty ordinal", 0);
  do {
    const std::size_t start = in.pos();
    Term t;
    if (in.accept('w')) {
      t.exponent = 1;
      if (in.accept('^')) {
        const std::uint64_t k = in.natural();
        if (k > UINT32_MAX) throw ParseError("ordinal exponent too large", start);
        t.exponent = static_cast<std::uint32_t>(k);
      }
      if (in.accept('*')) t.coefficient = in.natural();
    } else {
      t.exponent = 0;
      t.coefficient = in.natural();
    }
    if (t.coefficient == 0) {
      // A lone "0" is the zero ordinal; zero coefficients are otherwise malformed.
      if (t.exponent == 0 && terms.empty() && in.at_end()) return Ordinal();
      throw ParseError("ordinal coefficient must be at least 1", start);
    }
    if (!terms.empty() && t.exponent >= terms.back().exponent)
      throw ParseError("ordinal exponents must strictly decrease", start);
    terms.push_back(t);
  } while (in.accept('+'));
  if (!in.at_end()) throw ParseError("unexpected character in ordinal", in.pos());
  return from_terms(std::move(terms));
}

}  // namespace mucalc
