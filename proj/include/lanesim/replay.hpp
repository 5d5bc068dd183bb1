#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "lanesim/rng.hpp"
#include "lanesim/state.hpp"

namespace lanesim {

// One replay record: (s, a, r, s', terminal).
struct Transition {
  StateVector s;
  double a = 0.0;
  double r = 0.0;
  StateVector s_next;
  bool terminal = false;
};

// Fixed-capacity ring; oldest records are evicted first. Sampling is
// uniform with replacement over the stored records.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
    ring_.reserve(capacity_);
  }

  void push(const Transition& t) {
    if (ring_.size() < capacity_) {
      ring_.push_back(t);
    } else {
      ring_[insert_count_ % capacity_] = t;
    }
    ++insert_count_;
  }

  std::size_t size() const { return ring_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::size_t insert_count() const { return insert_count_; }
  const Transition& at(std::size_t i) const { return ring_[i]; }

  void sample(std::size_t n, Rng& rng, std::vector<const Transition*>& out) const {
    if (ring_.empty()) throw std::logic_error("ReplayBuffer: sampling from empty buffer");
    out.clear();
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(&ring_[uniform_index(rng, ring_.size())]);
    }
  }

 private:
  std::size_t capacity_;
  std::size_t insert_count_ = 0;
  std::vector<Transition> ring_;
};

}  // namespace lanesim
