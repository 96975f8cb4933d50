#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aspectgp/clause.hpp"

namespace aspectgp {

/// Node kinds. Terminals mirror the five indicators in order; their text
/// forms are NP, SP, AM, NPT, PPP.
enum class Op : std::uint8_t {
  Add,
  Sub,
  Mul,
  And,
  Or,
  If,
  NotProgressive,
  SpecialPerfect,
  AllMatch,
  NotPresTense,
  PastPresParticiple,
};

constexpr int kNumOperators = 6;
constexpr int kNumKinds = 11;

constexpr bool is_terminal(Op op) { return op >= Op::NotProgressive; }

constexpr int arity(Op op) {
  if (op == Op::If) return 3;
  return is_terminal(op) ? 0 : 2;
}

constexpr int terminal_index(Op op) {
  return static_cast<int>(op) - static_cast<int>(Op::NotProgressive);
}

/// An expression tree stored as prefix code. A single terminal is the
/// smallest valid tree.
struct ExprTree {
  std::vector<Op> code;

  std::size_t node_count() const { return code.size(); }
  bool operator==(const ExprTree&) const = default;

  static ExprTree leaf(Op terminal) { return ExprTree{{terminal}}; }
};

/// One-past-the-end position of the subtree rooted at pos.
std::size_t subtree_end(std::span<const Op> code, std::size_t pos);

/// True when code encodes exactly one complete expression.
bool is_valid_tree(const ExprTree& tree);

int tree_depth(const ExprTree& tree);

/// Evaluates the tree on one similar clause's indicator bits. Add, Sub
/// and Mul saturate at the signed 64-bit bounds; And/Or/If treat any
/// nonzero value as true; If yields its second or third child.
std::int64_t eval_tree(const ExprTree& tree, IndicatorBits bits);

/// eval_tree over all 32 indicator patterns, indexed by IndicatorBits::pack().
/// The full behavior of a tree: two trees with equal tables score equally
/// everywhere.
std::array<std::int64_t, 32> eval_all_patterns(const ExprTree& tree);

std::int64_t sat_add(std::int64_t a, std::int64_t b);
std::int64_t sat_sub(std::int64_t a, std::int64_t b);
std::int64_t sat_mul(std::int64_t a, std::int64_t b);

/// Prefix s-expression form, e.g. `(if AM (mul (add NP NPT) SP) (sub NP PPP))`.
std::string print_tree(const ExprTree& tree);

/// Inverse of print_tree. Throws std::invalid_argument on malformed input.
ExprTree parse_tree(std::string_view text);

}  // namespace aspectgp
