#include "polypen/tape.hpp"

#include <algorithm>
#include <string>

#include "polypen/error.hpp"

namespace polypen {

TapeValue Tape::push(TapeOp op, std::int32_t lhs, std::int32_t rhs, double value, int level,
                     bool secret) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({op, lhs, rhs, level, secret});
  stats_.max_level = std::max(stats_.max_level, level);
  if (budget_ && level > *budget_) {
    budget_exceeded_ = true;
  }
  return {this, id, value, level, secret};
}

TapeValue Tape::input(double value, bool secret) {
  return push(TapeOp::input, -1, -1, value, 0, secret);
}

TapeValue Tape::constant(double value) { return push(TapeOp::constant, -1, -1, value, 0, false); }

int Tape::recompute_max_level() const {
  std::vector<int> level(nodes_.size(), 0);
  std::vector<char> secret(nodes_.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const TapeNode& n = nodes_[i];
    switch (n.op) {
      case TapeOp::input:
        secret[i] = n.secret;
        break;
      case TapeOp::constant:
        break;
      case TapeOp::add:
        level[i] = std::max(level[n.lhs], level[n.rhs]);
        secret[i] = secret[n.lhs] || secret[n.rhs];
        break;
      case TapeOp::mul:
        level[i] = std::max(level[n.lhs], level[n.rhs]) + (secret[n.lhs] && secret[n.rhs] ? 1 : 0);
        secret[i] = secret[n.lhs] || secret[n.rhs];
        break;
    }
    best = std::max(best, level[i]);
  }
  return best;
}

void Tape::reject(std::string_view what) {
  ++stats_.non_polynomial_events;
  throw NonPolynomialOperation("non-polynomial operation on the arithmetic tape: " +
                               std::string(what));
}

TapeValue Tape::divide(const TapeValue&, const TapeValue&) { reject("division"); }

bool Tape::less(const TapeValue&, const TapeValue&) { reject("comparison"); }

TapeValue operator+(const TapeValue& a, const TapeValue& b) {
  Tape& t = *a.tape_;
  const bool secret = a.secret_ || b.secret_;
  if (secret) {
    ++t.stats_.adds;
  } else {
    ++t.stats_.plain_ops;
  }
  return t.push(TapeOp::add, a.id_, b.id_, a.value_ + b.value_, std::max(a.level_, b.level_),
                secret);
}

TapeValue operator*(const TapeValue& a, const TapeValue& b) {
  Tape& t = *a.tape_;
  const bool both = a.secret_ && b.secret_;
  const bool secret = a.secret_ || b.secret_;
  if (both) {
    ++t.stats_.ct_ct_muls;
  } else if (secret) {
    ++t.stats_.ct_pt_muls;
  } else {
    ++t.stats_.plain_ops;
  }
  return t.push(TapeOp::mul, a.id_, b.id_, a.value_ * b.value_,
                std::max(a.level_, b.level_) + (both ? 1 : 0), secret);
}

TapeValue operator*(const TapeValue& a, double c) { return a * a.tape_->constant(c); }

TapeValue operator-(const TapeValue& a) { return a * -1.0; }

TapeValue operator-(const TapeValue& a, const TapeValue& b) { return a + (-b); }

}  // namespace polypen
