#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace credal::gadgets {

/// Propositional formula over z1..zN. Grammar:
///   or   := and ('|' and)*
///   and  := not ('&' not)*
///   not  := '~' not | atom
///   atom := 'z' digits | '(' or ')'
class Formula {
 public:
  enum class Op { Var, Not, And, Or };
  struct Node {
    Op op = Op::Var;
    int var = 0;  ///< 1-based variable index for Var
    int left = -1;
    int right = -1;
  };

  static Formula parse(std::string_view text);

  const std::vector<Node>& nodes() const { return nodes_; }
  int root() const { return root_; }
  /// Largest variable index that occurs.
  int max_variable() const { return max_variable_; }
  /// Number of operator nodes.
  std::size_t gate_count() const;

  /// assignment[i] is the value of z_{i+1}.
  bool evaluate(const std::vector<bool>& assignment) const;

  /// Fully parenthesized rendering.
  std::string to_string() const;

  /// Node indices in left-to-right post-order.
  std::vector<int> post_order() const;

 private:
  std::vector<Node> nodes_;
  int root_ = -1;
  int max_variable_ = 0;
};

}  // namespace credal::gadgets
