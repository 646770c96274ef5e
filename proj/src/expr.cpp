#include "valign/expr.hpp"

#include <cctype>

#include "valign/errors.hpp"

namespace valign {
namespace {

enum class Tok { end, ident, number, text, lparen, rparen, plus, minus, star,
                 eq, ne, lt, le, gt, ge };

struct Token {
    Tok kind = Tok::end;
    std::string value; // ident name, quoted text, or number literal
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token next() {
        Token t = current_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& why) const {
        raise(ErrorCode::parse_error, "expression '" + src_ + "': " + why);
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
            ++pos_;
        }
        current_ = Token{};
        if (pos_ >= src_.size()) return;
        const char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            current_ = {Tok::ident, src_.substr(start, pos_ - start)};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) {
                ++pos_;
            }
            current_ = {Tok::number, src_.substr(start, pos_ - start)};
            return;
        }
        if (c == '\'' || c == '"') {
            const char quote = c;
            std::size_t start = ++pos_;
            while (pos_ < src_.size() && src_[pos_] != quote) ++pos_;
            if (pos_ >= src_.size()) fail("unterminated quoted text");
            current_ = {Tok::text, src_.substr(start, pos_ - start)};
            ++pos_;
            return;
        }
        auto two = [&](char a, char b) {
            return c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
        };
        if (two('=', '=')) { pos_ += 2; current_ = {Tok::eq, "=="}; return; }
        if (two('!', '=')) { pos_ += 2; current_ = {Tok::ne, "!="}; return; }
        if (two('<', '=')) { pos_ += 2; current_ = {Tok::le, "<="}; return; }
        if (two('>', '=')) { pos_ += 2; current_ = {Tok::ge, ">="}; return; }
        ++pos_;
        switch (c) {
        case '(': current_ = {Tok::lparen, "("}; return;
        case ')': current_ = {Tok::rparen, ")"}; return;
        case '+': current_ = {Tok::plus, "+"}; return;
        case '-': current_ = {Tok::minus, "-"}; return;
        case '*': current_ = {Tok::star, "*"}; return;
        case '=': current_ = {Tok::eq, "="}; return;
        case '<': current_ = {Tok::lt, "<"}; return;
        case '>': current_ = {Tok::gt, ">"}; return;
        default: fail(std::string("unexpected character '") + c + "'");
        }
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    Token current_;
};

} // namespace

namespace detail {

enum class OperandKind { variable, action_ref, number, boolean, text };

struct Operand {
    OperandKind kind = OperandKind::number;
    std::string name;  // variable name or quoted text
    Decimal number;
    bool boolean = false;
    VarType var_type = VarType::decimal; // resolved at bind for variables
};

enum class CmpOp { eq, ne, lt, le };

struct BoolNode {
    enum class Kind { const_true, const_false, conj, disj, negation, compare };
    Kind kind = Kind::const_true;
    std::unique_ptr<BoolNode> lhs;
    std::unique_ptr<BoolNode> rhs;
    CmpOp cmp = CmpOp::eq;
    Operand a, b;

    std::unique_ptr<BoolNode> clone() const {
        auto n = std::make_unique<BoolNode>();
        n->kind = kind;
        n->cmp = cmp;
        n->a = a;
        n->b = b;
        if (lhs) n->lhs = lhs->clone();
        if (rhs) n->rhs = rhs->clone();
        return n;
    }
};

struct ArithNode {
    enum class Kind { add, sub, mul, neg, number, variable };
    Kind kind = Kind::number;
    std::unique_ptr<ArithNode> lhs;
    std::unique_ptr<ArithNode> rhs;
    Decimal number;
    std::string name;

    std::unique_ptr<ArithNode> clone() const {
        auto n = std::make_unique<ArithNode>();
        n->kind = kind;
        n->number = number;
        n->name = name;
        if (lhs) n->lhs = lhs->clone();
        if (rhs) n->rhs = rhs->clone();
        return n;
    }
};

} // namespace detail

namespace {

using detail::ArithNode;
using detail::BoolNode;
using detail::CmpOp;
using detail::Operand;
using detail::OperandKind;

bool is_keyword(const std::string& s) {
    return s == "and" || s == "or" || s == "not" || s == "true" || s == "false" ||
           s == "action";
}

Operand parse_operand(Lexer& lex) {
    Operand op;
    const Token t = lex.next();
    switch (t.kind) {
    case Tok::ident:
        if (t.value == "true" || t.value == "false") {
            op.kind = OperandKind::boolean;
            op.boolean = t.value == "true";
        } else if (t.value == "action") {
            op.kind = OperandKind::action_ref;
        } else if (is_keyword(t.value)) {
            lex.fail("keyword '" + t.value + "' cannot be a comparison operand");
        } else {
            op.kind = OperandKind::variable;
            op.name = t.value;
        }
        return op;
    case Tok::number:
        op.kind = OperandKind::number;
        op.number = Decimal::from_string(t.value);
        return op;
    case Tok::minus: {
        const Token n = lex.next();
        if (n.kind != Tok::number) lex.fail("expected number after unary minus");
        op.kind = OperandKind::number;
        op.number = -Decimal::from_string(n.value);
        return op;
    }
    case Tok::text:
        op.kind = OperandKind::text;
        op.name = t.value;
        return op;
    default:
        lex.fail("expected a comparison operand");
    }
}

std::unique_ptr<BoolNode> parse_or(Lexer& lex);

std::unique_ptr<BoolNode> parse_factor(Lexer& lex) {
    const Token& t = lex.peek();
    if (t.kind == Tok::ident && t.value == "not") {
        lex.next();
        auto node = std::make_unique<BoolNode>();
        node->kind = BoolNode::Kind::negation;
        node->lhs = parse_factor(lex);
        return node;
    }
    if (t.kind == Tok::lparen) {
        lex.next();
        auto inner = parse_or(lex);
        if (lex.peek().kind != Tok::rparen) lex.fail("missing ')'");
        lex.next();
        return inner;
    }
    if (t.kind == Tok::ident && (t.value == "true" || t.value == "false")) {
        // Lone boolean constant, unless it is the left side of a comparison.
        Lexer probe = lex;
        probe.next();
        const Tok follow = probe.peek().kind;
        const bool comparison = follow == Tok::eq || follow == Tok::ne ||
                                follow == Tok::lt || follow == Tok::le ||
                                follow == Tok::gt || follow == Tok::ge;
        if (!comparison) {
            auto node = std::make_unique<BoolNode>();
            node->kind = t.value == "true" ? BoolNode::Kind::const_true
                                          : BoolNode::Kind::const_false;
            lex.next();
            return node;
        }
    }
    auto node = std::make_unique<BoolNode>();
    node->kind = BoolNode::Kind::compare;
    node->a = parse_operand(lex);
    const Token opTok = lex.next();
    bool swap = false;
    switch (opTok.kind) {
    case Tok::eq: node->cmp = CmpOp::eq; break;
    case Tok::ne: node->cmp = CmpOp::ne; break;
    case Tok::lt: node->cmp = CmpOp::lt; break;
    case Tok::le: node->cmp = CmpOp::le; break;
    case Tok::gt: node->cmp = CmpOp::lt; swap = true; break;
    case Tok::ge: node->cmp = CmpOp::le; swap = true; break;
    default: lex.fail("expected a comparison operator");
    }
    node->b = parse_operand(lex);
    if (swap) std::swap(node->a, node->b);
    return node;
}

std::unique_ptr<BoolNode> parse_and(Lexer& lex) {
    auto node = parse_factor(lex);
    while (lex.peek().kind == Tok::ident && lex.peek().value == "and") {
        lex.next();
        auto parent = std::make_unique<BoolNode>();
        parent->kind = BoolNode::Kind::conj;
        parent->lhs = std::move(node);
        parent->rhs = parse_factor(lex);
        node = std::move(parent);
    }
    return node;
}

std::unique_ptr<BoolNode> parse_or(Lexer& lex) {
    auto node = parse_and(lex);
    while (lex.peek().kind == Tok::ident && lex.peek().value == "or") {
        lex.next();
        auto parent = std::make_unique<BoolNode>();
        parent->kind = BoolNode::Kind::disj;
        parent->lhs = std::move(node);
        parent->rhs = parse_and(lex);
        node = std::move(parent);
    }
    return node;
}

void bind_operand(Operand& op, const Schema& schema, const std::set<std::string>* actions,
                  const std::string& text) {
    if (op.kind == OperandKind::variable) {
        const VarDecl* decl = schema.find(op.name);
        if (!decl) {
            raise(ErrorCode::schema_mismatch,
                  "expression '" + text + "' references unknown variable '" + op.name + "'");
        }
        op.var_type = decl->type;
    } else if (op.kind == OperandKind::action_ref && actions == nullptr) {
        raise(ErrorCode::schema_mismatch,
              "expression '" + text + "' may not reference the action here");
    }
}

enum class OperandClass { numeric, boolean, action_text };

OperandClass classify(const Operand& op) {
    switch (op.kind) {
    case OperandKind::variable:
        return op.var_type == VarType::boolean ? OperandClass::boolean
                                               : OperandClass::numeric;
    case OperandKind::number: return OperandClass::numeric;
    case OperandKind::boolean: return OperandClass::boolean;
    case OperandKind::action_ref:
    case OperandKind::text: return OperandClass::action_text;
    }
    return OperandClass::numeric;
}

void bind_compare(BoolNode& node, const Schema& schema, const std::set<std::string>* actions,
                  const std::string& text) {
    bind_operand(node.a, schema, actions, text);
    bind_operand(node.b, schema, actions, text);
    const OperandClass ca = classify(node.a);
    const OperandClass cb = classify(node.b);
    if (ca != cb) {
        raise(ErrorCode::schema_mismatch,
              "expression '" + text + "' compares incompatible operand types");
    }
    if (ca != OperandClass::numeric && (node.cmp == CmpOp::lt || node.cmp == CmpOp::le)) {
        raise(ErrorCode::schema_mismatch,
              "expression '" + text + "' orders non-numeric operands");
    }
    if (ca == OperandClass::action_text && actions != nullptr) {
        for (const Operand* op : {&node.a, &node.b}) {
            if (op->kind == OperandKind::text && !actions->contains(op->name)) {
                raise(ErrorCode::schema_mismatch,
                      "expression '" + text + "' references undeclared action '" +
                          op->name + "'");
            }
        }
    }
}

void bind_bool(BoolNode& node, const Schema& schema, const std::set<std::string>* actions,
               const std::string& text) {
    switch (node.kind) {
    case BoolNode::Kind::const_true:
    case BoolNode::Kind::const_false:
        return;
    case BoolNode::Kind::negation:
        bind_bool(*node.lhs, schema, actions, text);
        return;
    case BoolNode::Kind::conj:
    case BoolNode::Kind::disj:
        bind_bool(*node.lhs, schema, actions, text);
        bind_bool(*node.rhs, schema, actions, text);
        return;
    case BoolNode::Kind::compare:
        bind_compare(node, schema, actions, text);
        return;
    }
}

struct OperandValue {
    OperandClass cls;
    Decimal num;
    bool b = false;
    std::string_view text;
};

OperandValue eval_operand(const Operand& op, const VarMap& vars, const std::string* action) {
    OperandValue v{classify(op), Decimal{}, false, {}};
    switch (op.kind) {
    case OperandKind::variable: {
        const auto it = vars.find(op.name);
        if (it == vars.end()) {
            raise(ErrorCode::schema_mismatch, "state lacks variable '" + op.name + "'");
        }
        if (const bool* bp = std::get_if<bool>(&it->second)) {
            v.b = *bp;
        } else {
            v.num = to_decimal(it->second);
        }
        return v;
    }
    case OperandKind::number: v.num = op.number; return v;
    case OperandKind::boolean: v.b = op.boolean; return v;
    case OperandKind::text: v.text = op.name; return v;
    case OperandKind::action_ref:
        if (action == nullptr) {
            raise(ErrorCode::schema_mismatch, "no action available for 'action' operand");
        }
        v.text = *action;
        return v;
    }
    return v;
}

bool eval_bool(const BoolNode& node, const VarMap& vars, const std::string* action) {
    switch (node.kind) {
    case BoolNode::Kind::const_true: return true;
    case BoolNode::Kind::const_false: return false;
    case BoolNode::Kind::negation: return !eval_bool(*node.lhs, vars, action);
    case BoolNode::Kind::conj:
        return eval_bool(*node.lhs, vars, action) && eval_bool(*node.rhs, vars, action);
    case BoolNode::Kind::disj:
        return eval_bool(*node.lhs, vars, action) || eval_bool(*node.rhs, vars, action);
    case BoolNode::Kind::compare: {
        const OperandValue a = eval_operand(node.a, vars, action);
        const OperandValue b = eval_operand(node.b, vars, action);
        bool eq = false;
        bool lt = false;
        if (a.cls == OperandClass::numeric) {
            eq = a.num == b.num;
            lt = a.num < b.num;
        } else if (a.cls == OperandClass::boolean) {
            eq = a.b == b.b;
        } else {
            eq = a.text == b.text;
        }
        switch (node.cmp) {
        case CmpOp::eq: return eq;
        case CmpOp::ne: return !eq;
        case CmpOp::lt: return lt;
        case CmpOp::le: return lt || eq;
        }
        return false;
    }
    }
    return false;
}

std::unique_ptr<ArithNode> parse_sum(Lexer& lex);

std::unique_ptr<ArithNode> parse_atom(Lexer& lex) {
    const Token t = lex.next();
    auto node = std::make_unique<ArithNode>();
    switch (t.kind) {
    case Tok::number:
        node->kind = ArithNode::Kind::number;
        node->number = Decimal::from_string(t.value);
        return node;
    case Tok::ident:
        if (is_keyword(t.value)) lex.fail("'" + t.value + "' is not a variable");
        node->kind = ArithNode::Kind::variable;
        node->name = t.value;
        return node;
    case Tok::minus:
        node->kind = ArithNode::Kind::neg;
        node->lhs = parse_atom(lex);
        return node;
    case Tok::lparen: {
        auto inner = parse_sum(lex);
        if (lex.peek().kind != Tok::rparen) lex.fail("missing ')'");
        lex.next();
        return inner;
    }
    default:
        lex.fail("expected number, variable, or '('");
    }
}

std::unique_ptr<ArithNode> parse_product(Lexer& lex) {
    auto node = parse_atom(lex);
    while (lex.peek().kind == Tok::star) {
        lex.next();
        auto parent = std::make_unique<ArithNode>();
        parent->kind = ArithNode::Kind::mul;
        parent->lhs = std::move(node);
        parent->rhs = parse_atom(lex);
        node = std::move(parent);
    }
    return node;
}

std::unique_ptr<ArithNode> parse_sum(Lexer& lex) {
    auto node = parse_product(lex);
    while (lex.peek().kind == Tok::plus || lex.peek().kind == Tok::minus) {
        const bool add = lex.next().kind == Tok::plus;
        auto parent = std::make_unique<ArithNode>();
        parent->kind = add ? ArithNode::Kind::add : ArithNode::Kind::sub;
        parent->lhs = std::move(node);
        parent->rhs = parse_product(lex);
        node = std::move(parent);
    }
    return node;
}

void bind_arith(const ArithNode& node, const Schema& schema, const std::string& text) {
    switch (node.kind) {
    case ArithNode::Kind::number: return;
    case ArithNode::Kind::variable: {
        const VarDecl* decl = schema.find(node.name);
        if (!decl) {
            raise(ErrorCode::schema_mismatch,
                  "expression '" + text + "' references unknown variable '" + node.name + "'");
        }
        if (decl->type == VarType::boolean) {
            raise(ErrorCode::schema_mismatch,
                  "expression '" + text + "' uses boolean variable '" + node.name +
                      "' arithmetically");
        }
        return;
    }
    case ArithNode::Kind::neg:
        bind_arith(*node.lhs, schema, text);
        return;
    default:
        bind_arith(*node.lhs, schema, text);
        bind_arith(*node.rhs, schema, text);
        return;
    }
}

Decimal eval_arith(const ArithNode& node, const VarMap& vars) {
    switch (node.kind) {
    case ArithNode::Kind::number: return node.number;
    case ArithNode::Kind::variable: {
        const auto it = vars.find(node.name);
        if (it == vars.end()) {
            raise(ErrorCode::schema_mismatch, "state lacks variable '" + node.name + "'");
        }
        return to_decimal(it->second);
    }
    case ArithNode::Kind::neg: return -eval_arith(*node.lhs, vars);
    case ArithNode::Kind::add: return eval_arith(*node.lhs, vars) + eval_arith(*node.rhs, vars);
    case ArithNode::Kind::sub: return eval_arith(*node.lhs, vars) - eval_arith(*node.rhs, vars);
    case ArithNode::Kind::mul: return eval_arith(*node.lhs, vars) * eval_arith(*node.rhs, vars);
    }
    return Decimal{};
}

} // namespace

BoolExpr::BoolExpr() = default;
BoolExpr::~BoolExpr() = default;
BoolExpr::BoolExpr(BoolExpr&&) noexcept = default;
BoolExpr& BoolExpr::operator=(BoolExpr&&) noexcept = default;

BoolExpr::BoolExpr(const BoolExpr& other) : text_(other.text_) {
    if (other.root_) root_ = other.root_->clone();
}

BoolExpr& BoolExpr::operator=(const BoolExpr& other) {
    if (this != &other) {
        text_ = other.text_;
        root_ = other.root_ ? other.root_->clone() : nullptr;
    }
    return *this;
}

BoolExpr BoolExpr::parse(const std::string& text) {
    Lexer lex(text);
    BoolExpr e;
    e.text_ = text;
    e.root_ = parse_or(lex);
    if (lex.peek().kind != Tok::end) lex.fail("trailing input");
    return e;
}

void BoolExpr::bind(const Schema& schema, const std::set<std::string>* actions) {
    bind_bool(*root_, schema, actions, text_);
}

bool BoolExpr::eval(const VarMap& vars, const std::string* action) const {
    return eval_bool(*root_, vars, action);
}

ArithExpr::ArithExpr() = default;
ArithExpr::~ArithExpr() = default;
ArithExpr::ArithExpr(ArithExpr&&) noexcept = default;
ArithExpr& ArithExpr::operator=(ArithExpr&&) noexcept = default;

ArithExpr::ArithExpr(const ArithExpr& other) : text_(other.text_) {
    if (other.root_) root_ = other.root_->clone();
}

ArithExpr& ArithExpr::operator=(const ArithExpr& other) {
    if (this != &other) {
        text_ = other.text_;
        root_ = other.root_ ? other.root_->clone() : nullptr;
    }
    return *this;
}

ArithExpr ArithExpr::parse(const std::string& text) {
    Lexer lex(text);
    ArithExpr e;
    e.text_ = text;
    e.root_ = parse_sum(lex);
    if (lex.peek().kind != Tok::end) lex.fail("trailing input");
    return e;
}

void ArithExpr::bind(const Schema& schema) { bind_arith(*root_, schema, text_); }

Decimal ArithExpr::eval(const VarMap& vars) const { return eval_arith(*root_, vars); }

} // namespace valign
