#include "credal/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "credal/rational.hpp"

namespace credal::gadgets {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Formula::Node> nodes;
  int max_variable = 0;

  int parse_all() {
    const int root = parse_or();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw CredalError(ErrorKind::Parse, "malformed formula at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int add(Formula::Node node) {
    nodes.push_back(node);
    return static_cast<int>(nodes.size()) - 1;
  }

  int parse_or() {
    int left = parse_and();
    while (accept('|')) left = add({Formula::Op::Or, 0, left, parse_and()});
    return left;
  }

  int parse_and() {
    int left = parse_not();
    while (accept('&')) left = add({Formula::Op::And, 0, left, parse_not()});
    return left;
  }

  int parse_not() {
    if (accept('~')) return add({Formula::Op::Not, 0, parse_not(), -1});
    return parse_atom();
  }

  int parse_atom() {
    if (accept('(')) {
      const int inner = parse_or();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] != 'z') fail("expected a variable z<index>");
    ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_ || pos_ - start > 6) fail("bad variable index");
    const int index = std::stoi(std::string(text_.substr(start, pos_ - start)));
    if (index < 1) fail("variable indices start at 1");
    max_variable = std::max(max_variable, index);
    return add({Formula::Op::Var, index, -1, -1});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula Formula::parse(std::string_view text) {
  Parser p(text);
  Formula f;
  f.root_ = p.parse_all();
  f.nodes_ = std::move(p.nodes);
  f.max_variable_ = p.max_variable;
  return f;
}

std::size_t Formula::gate_count() const {
  std::size_t count = 0;
  for (const auto& n : nodes_)
    if (n.op != Op::Var) ++count;
  return count;
}

bool Formula::evaluate(const std::vector<bool>& assignment) const {
  std::function<bool(int)> eval = [&](int i) -> bool {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::Var: return assignment[static_cast<std::size_t>(n.var - 1)];
      case Op::Not: return !eval(n.left);
      case Op::And: return eval(n.left) && eval(n.right);
      case Op::Or: return eval(n.left) || eval(n.right);
    }
    return false;
  };
  return eval(root_);
}

std::string Formula::to_string() const {
  std::function<std::string(int)> render = [&](int i) -> std::string {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    switch (n.op) {
      case Op::Var: return "z" + std::to_string(n.var);
      case Op::Not: return "~" + render(n.left);
      case Op::And: return "(" + render(n.left) + "&" + render(n.right) + ")";
      case Op::Or: return "(" + render(n.left) + "|" + render(n.right) + ")";
    }
    return {};
  };
  return render(root_);
}

std::vector<int> Formula::post_order() const {
  std::vector<int> order;
  std::function<void(int)> walk = [&](int i) {
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.left >= 0) walk(n.left);
    if (n.right >= 0) walk(n.right);
    order.push_back(i);
  };
  walk(root_);
  return order;
}

}  // namespace credal::gadgets
