// A small arithmetic expression language over a fixed variable set, used to
// supply equation right-hand sides, kernels and side conditions as data.
//
// Grammar (EBNF):
//   expression := term { ("+" | "-") term }
//   term       := factor { ("*" | "/") factor }
//   factor     := "-" factor | power
//   power      := primary [ "^" factor ]          (right associative)
//   primary    := number | variable | call | "(" expression ")"
//   call       := function "(" expression { "," expression } ")"
//   variable   := "x" | "y" | "z" | "q" | "u" | "u1" | "u2" | "Hu"
//   function   := "sin" | "cos" | "exp" | "abs" | "sqrt"   (unary)
//              |  "min" | "max"                             (binary)

#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsde {

enum class Var : int { X = 0, Y, Z, Q, U, U1, U2, HU };
inline constexpr int kVarCount = 8;

std::optional<Var> var_from_name(std::string_view name);
std::string_view var_name(Var v);

/// Variable bindings for one evaluation. Unbound lookups are an error.
class Env {
public:
    Env& set(Var v, double value) {
        slots_[static_cast<int>(v)] = value;
        bound_ |= std::uint8_t{1} << static_cast<int>(v);
        return *this;
    }
    bool has(Var v) const { return bound_ & (std::uint8_t{1} << static_cast<int>(v)); }
    double get(Var v) const { return slots_[static_cast<int>(v)]; }

private:
    std::array<double, kVarCount> slots_{};
    std::uint8_t bound_ = 0;
};

/// Parse failure with the byte offset of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation failure: unbound variable, division by zero, domain violation
/// or a non-finite intermediate.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

/// An immutable parsed expression. Copies share the tree.
class Expr {
public:
    Expr() = default;

    static Expr parse(std::string_view text);

    /// IEEE double evaluation. Any non-finite intermediate aborts with
    /// EvalError instead of propagating NaN or infinity.
    double eval(const Env& env) const;

    /// Bitmask of variables referenced anywhere in the tree (bit = Var).
    std::uint8_t variables() const;

    std::string to_string() const;
    bool same_structure(const Expr& other) const;

    bool empty() const { return root_ == nullptr; }
    std::string_view text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace tsde
