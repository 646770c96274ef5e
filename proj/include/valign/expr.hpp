#pragma once

#include <memory>
#include <set>
#include <string>

#include "valign/schema.hpp"

namespace valign {

namespace detail {
struct BoolNode;
struct ArithNode;
} // namespace detail

/// Boolean expression over the variables of one state, plus (for norm guards)
/// the action id of the transition under test. Grammar, loosest first:
///
///   expr    := term ('or' term)*
///   term    := factor ('and' factor)*
///   factor  := 'not' factor | '(' expr ')' | 'true' | 'false' | comparison
///   comparison := operand ('=='|'='|'!='|'<'|'<='|'>'|'>=') operand
///   operand := variable | 'action' | number | 'true' | 'false' | 'quoted text'
///
/// Syntax errors raise ParseError; bind() checks every referenced name and
/// operand type against the schema and raises SchemaMismatch on violations.
class BoolExpr {
public:
    BoolExpr();
    ~BoolExpr();
    BoolExpr(BoolExpr&&) noexcept;
    BoolExpr& operator=(BoolExpr&&) noexcept;
    BoolExpr(const BoolExpr&);
    BoolExpr& operator=(const BoolExpr&);

    static BoolExpr parse(const std::string& text);

    /// actions == nullptr forbids the 'action' operand (predicate formulas).
    void bind(const Schema& schema, const std::set<std::string>* actions);

    bool eval(const VarMap& vars, const std::string* action) const;

    const std::string& text() const { return text_; }

private:
    std::unique_ptr<detail::BoolNode> root_;
    std::string text_;
};

/// Arithmetic expression over numeric state variables and decimal literals
/// with +, - and *. Used by rewrite effects; evaluation is exact scale-six
/// decimal arithmetic.
class ArithExpr {
public:
    ArithExpr();
    ~ArithExpr();
    ArithExpr(ArithExpr&&) noexcept;
    ArithExpr& operator=(ArithExpr&&) noexcept;
    ArithExpr(const ArithExpr&);
    ArithExpr& operator=(const ArithExpr&);

    static ArithExpr parse(const std::string& text);

    void bind(const Schema& schema);

    Decimal eval(const VarMap& vars) const;

    const std::string& text() const { return text_; }

private:
    std::unique_ptr<detail::ArithNode> root_;
    std::string text_;
};

} // namespace valign
