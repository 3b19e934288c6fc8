#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace polypen {

// Operation counts of one recorded computation. Operations whose operands are
// all public are plaintext arithmetic and only show up in plain_ops.
struct CircuitStats {
  std::uint64_t adds = 0;        // ciphertext additions (subtraction included)
  std::uint64_t ct_ct_muls = 0;  // ciphertext x ciphertext
  std::uint64_t ct_pt_muls = 0;  // ciphertext x public scalar (negation included)
  int max_level = 0;             // multiplicative depth
  std::uint64_t plain_ops = 0;
  std::uint64_t non_polynomial_events = 0;
};

enum class TapeOp : std::uint8_t { input, constant, add, mul };

struct TapeNode {
  TapeOp op;
  std::int32_t lhs = -1;
  std::int32_t rhs = -1;
  int level = 0;
  bool secret = false;
};

class TapeValue;

// Records every arithmetic operation of a computation as a DAG, tracking the
// multiplicative level incrementally:
//   level(a + b) = max(level a, level b)
//   level(a * b) = max(level a, level b) + [a and b both secret]
// Only add and multiply exist. Division and comparison are rejected at run
// time through reject(), and TapeValue deletes the corresponding operators so
// they do not compile in the first place.
class Tape {
public:
  explicit Tape(std::optional<int> level_budget = std::nullopt) : budget_(level_budget) {}

  // A ciphertext input (secret = true) or a public input.
  TapeValue input(double value, bool secret);
  TapeValue constant(double value);

  const CircuitStats& stats() const noexcept { return stats_; }
  const std::vector<TapeNode>& nodes() const noexcept { return nodes_; }
  bool budget_exceeded() const noexcept { return budget_exceeded_; }

  // Recomputes the maximum level from the recorded DAG alone.
  int recompute_max_level() const;

  // Records a non-polynomial attempt and throws NonPolynomialOperation.
  [[noreturn]] void reject(std::string_view what);
  [[noreturn]] TapeValue divide(const TapeValue& a, const TapeValue& b);
  [[noreturn]] bool less(const TapeValue& a, const TapeValue& b);

private:
  friend class TapeValue;
  friend TapeValue operator+(const TapeValue&, const TapeValue&);
  friend TapeValue operator*(const TapeValue&, const TapeValue&);

  TapeValue push(TapeOp op, std::int32_t lhs, std::int32_t rhs, double value, int level,
                 bool secret);

  std::vector<TapeNode> nodes_;
  CircuitStats stats_;
  std::optional<int> budget_;
  bool budget_exceeded_ = false;
};

class TapeValue {
public:
  double value() const noexcept { return value_; }
  int level() const noexcept { return level_; }
  bool secret() const noexcept { return secret_; }
  std::int32_t id() const noexcept { return id_; }

  friend TapeValue operator+(const TapeValue& a, const TapeValue& b);
  friend TapeValue operator*(const TapeValue& a, const TapeValue& b);
  friend TapeValue operator*(const TapeValue& a, double c);
  friend TapeValue operator-(const TapeValue& a);
  friend TapeValue operator-(const TapeValue& a, const TapeValue& b);

  friend TapeValue operator/(const TapeValue&, const TapeValue&) = delete;
  friend TapeValue operator/(const TapeValue&, double) = delete;
  friend bool operator<(const TapeValue&, const TapeValue&) = delete;
  friend bool operator>(const TapeValue&, const TapeValue&) = delete;
  friend bool operator<=(const TapeValue&, const TapeValue&) = delete;
  friend bool operator>=(const TapeValue&, const TapeValue&) = delete;
  friend bool operator==(const TapeValue&, const TapeValue&) = delete;
  explicit operator bool() const = delete;

private:
  friend class Tape;
  TapeValue(Tape* tape, std::int32_t id, double value, int level, bool secret)
      : tape_(tape), id_(id), value_(value), level_(level), secret_(secret) {}

  Tape* tape_;
  std::int32_t id_;
  double value_;
  int level_;
  bool secret_;
};

}  // namespace polypen
