#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mucalc {

using StateIndex = std::size_t;

// Dense subset of {0, ..., universe-1}, one bit per state.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static StateSet full(std::size_t universe) {
    StateSet s(universe);
    for (StateIndex i = 0; i < universe; ++i) s.insert(i);
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }

  bool contains(StateIndex i) const noexcept {
    return i < universe_ && ((words_[i / 64] >> (i % 64)) & 1u) != 0;
  }

  void insert(StateIndex i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  void erase(StateIndex i) { words_[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }

  std::size_t count() const noexcept {
    std::size_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  bool empty() const noexcept { return count() == 0; }

  bool is_subset_of(const StateSet& other) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if ((words_[k] & ~other.words_[k]) != 0) return false;
    return true;
  }

  StateSet& operator|=(const StateSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  StateSet& operator&=(const StateSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }

  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }

  // Complement relative to the universe.
  StateSet complement() const {
    StateSet out(universe_);
    for (StateIndex i = 0; i < universe_; ++i)
      if (!contains(i)) out.insert(i);
    return out;
  }

  std::vector<StateIndex> indices() const {
    std::vector<StateIndex> out;
    for (StateIndex i = 0; i < universe_; ++i)
      if (contains(i)) out.push_back(i);
    return out;
  }

  friend bool operator==(const StateSet&, const StateSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace mucalc
