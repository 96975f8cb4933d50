#include "aspectgp/expr.hpp"

#include <limits>
#include <stdexcept>

namespace aspectgp {

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

constexpr std::array<std::string_view, kNumKinds> kOpNames = {
    "add", "sub", "mul", "and", "or", "if", "NP", "SP", "AM", "NPT", "PPP"};

}  // namespace

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) return b > 0 ? kMax : kMin;
  return r;
}

std::int64_t sat_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) return b < 0 ? kMax : kMin;
  return r;
}

std::int64_t sat_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return (a > 0) == (b > 0) ? kMax : kMin;
  return r;
}

std::size_t subtree_end(std::span<const Op> code, std::size_t pos) {
  std::size_t need = 1;
  while (need > 0) {
    if (pos >= code.size()) throw std::invalid_argument("truncated tree code");
    need += static_cast<std::size_t>(arity(code[pos])) - 1;
    ++pos;
  }
  return pos;
}

bool is_valid_tree(const ExprTree& tree) {
  if (tree.code.empty()) return false;
  try {
    return subtree_end(tree.code, 0) == tree.code.size();
  } catch (const std::invalid_argument&) {
    return false;
  }
}

namespace {

int depth_at(std::span<const Op> code, std::size_t& pos) {
  const Op op = code[pos++];
  int deepest = 0;
  for (int c = 0; c < arity(op); ++c)
    deepest = std::max(deepest, depth_at(code, pos));
  return deepest + 1;
}

std::int64_t eval_at(std::span<const Op> code, std::size_t& pos,
                     IndicatorBits bits) {
  const Op op = code[pos++];
  if (is_terminal(op)) return bits.bit(terminal_index(op)) ? 1 : 0;
  if (op == Op::If) {
    const std::int64_t cond = eval_at(code, pos, bits);
    const std::int64_t then_v = eval_at(code, pos, bits);
    const std::int64_t else_v = eval_at(code, pos, bits);
    return cond != 0 ? then_v : else_v;
  }
  const std::int64_t a = eval_at(code, pos, bits);
  const std::int64_t b = eval_at(code, pos, bits);
  switch (op) {
    case Op::Add: return sat_add(a, b);
    case Op::Sub: return sat_sub(a, b);
    case Op::Mul: return sat_mul(a, b);
    case Op::And: return (a != 0 && b != 0) ? 1 : 0;
    default: return (a != 0 || b != 0) ? 1 : 0;  // Or
  }
}

}  // namespace

int tree_depth(const ExprTree& tree) {
  std::size_t pos = 0;
  return depth_at(tree.code, pos);
}

std::int64_t eval_tree(const ExprTree& tree, IndicatorBits bits) {
  std::size_t pos = 0;
  return eval_at(tree.code, pos, bits);
}

std::array<std::int64_t, 32> eval_all_patterns(const ExprTree& tree) {
  std::array<std::int64_t, 32> table;
  for (int code = 0; code < 32; ++code)
    table[code] = eval_tree(tree, IndicatorBits::unpack(
                                      static_cast<std::uint8_t>(code)));
  return table;
}

namespace {

void print_at(std::span<const Op> code, std::size_t& pos, std::string& out) {
  const Op op = code[pos++];
  if (is_terminal(op)) {
    out += kOpNames[static_cast<int>(op)];
    return;
  }
  out += '(';
  out += kOpNames[static_cast<int>(op)];
  for (int c = 0; c < arity(op); ++c) {
    out += ' ';
    print_at(code, pos, out);
  }
  out += ')';
}

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' ||
                                 text[pos] == '\n' || text[pos] == '\r'))
      ++pos;
  }

  std::string_view symbol() {
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] != ' ' && text[pos] != '\t' &&
           text[pos] != '\n' && text[pos] != '\r' && text[pos] != '(' &&
           text[pos] != ')')
      ++pos;
    if (pos == start) throw std::invalid_argument("expected symbol");
    return text.substr(start, pos - start);
  }

  static Op op_from(std::string_view name) {
    for (int i = 0; i < kNumKinds; ++i)
      if (kOpNames[i] == name) return static_cast<Op>(i);
    throw std::invalid_argument("unknown symbol \"" + std::string(name) + "\"");
  }

  void expr(std::vector<Op>& out) {
    skip_ws();
    if (pos >= text.size()) throw std::invalid_argument("unexpected end of input");
    if (text[pos] != '(') {
      const Op op = op_from(symbol());
      if (!is_terminal(op))
        throw std::invalid_argument("operator outside parentheses");
      out.push_back(op);
      return;
    }
    ++pos;  // '('
    skip_ws();
    const Op op = op_from(symbol());
    if (is_terminal(op))
      throw std::invalid_argument("terminal used as operator");
    out.push_back(op);
    for (int c = 0; c < arity(op); ++c) expr(out);
    skip_ws();
    if (pos >= text.size() || text[pos] != ')')
      throw std::invalid_argument("expected ')'");
    ++pos;
  }
};

}  // namespace

std::string print_tree(const ExprTree& tree) {
  std::string out;
  std::size_t pos = 0;
  print_at(tree.code, pos, out);
  return out;
}

ExprTree parse_tree(std::string_view text) {
  Parser p{text};
  ExprTree tree;
  p.expr(tree.code);
  p.skip_ws();
  if (p.pos != text.size())
    throw std::invalid_argument("trailing input after expression");
  return tree;
}

}  // namespace aspectgp
