#include "gronwall/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <cstring>
#include <algorithm>

#include "gronwall/error.hpp"

namespace gronwall {

struct Expr::Node {
    Kind kind;
    double value = 0.0;
    std::string name;
    BinaryOp op = BinaryOp::add;
    Function fn = Function::exp;
    std::vector<Expr> children;
};

Expr Expr::number(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = value;
    return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::negate;
    n->children.push_back(std::move(operand));
    return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::binary;
    n->op = op;
    n->children.push_back(std::move(lhs));
    n->children.push_back(std::move(rhs));
    return Expr(std::move(n));
}

Expr Expr::call(Function fn, Expr argument) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->fn = fn;
    n->children.push_back(std::move(argument));
    return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
double Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
BinaryOp Expr::op() const { return node_->op; }
Function Expr::function() const { return node_->fn; }
const Expr& Expr::operand() const { return node_->children.at(0); }
const Expr& Expr::lhs() const { return node_->children.at(0); }
const Expr& Expr::rhs() const { return node_->children.at(1); }

bool Expr::is_literal_zero() const noexcept {
    if (node_->kind == Kind::number) return node_->value == 0.0;
    if (node_->kind == Kind::negate) return node_->children[0].is_literal_zero();
    return false;
}

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Expr::Kind::number: {
            // bitwise, so that -0 and 0 differ and NaN equals itself
            auto x = a.value(), y = b.value();
            return std::memcmp(&x, &y, sizeof x) == 0;
        }
        case Expr::Kind::variable: return a.name() == b.name();
        case Expr::Kind::negate: return a.operand() == b.operand();
        case Expr::Kind::binary: return a.op() == b.op() && a.lhs() == b.lhs() && a.rhs() == b.rhs();
        case Expr::Kind::call: return a.function() == b.function() && a.operand() == b.operand();
    }
    return false;
}

const double* EvalContext::find(std::string_view name) const {
    auto it = bindings_.find(name);
    return it == bindings_.end() ? nullptr : &it->second;
}

std::string_view function_name(Function fn) noexcept {
    switch (fn) {
        case Function::exp: return "exp";
        case Function::log: return "log";
        case Function::sin: return "sin";
        case Function::cos: return "cos";
        case Function::sqrt: return "sqrt";
        case Function::abs: return "abs";
    }
    return "?";
}

namespace {

std::optional<Function> lookup_function(std::string_view name) {
    static constexpr std::array<Function, 6> all{Function::exp, Function::log, Function::sin,
                                                 Function::cos, Function::sqrt, Function::abs};
    for (auto fn : all)
        if (function_name(fn) == name) return fn;
    return std::nullopt;
}

double apply_function(Function fn, double x) {
    switch (fn) {
        case Function::exp: return std::exp(x);
        case Function::log: return std::log(x);
        case Function::sin: return std::sin(x);
        case Function::cos: return std::cos(x);
        case Function::sqrt: return std::sqrt(x);
        case Function::abs: return std::fabs(x);
    }
    return std::nan("");
}

double apply_binary(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div: return a / b;
        case BinaryOp::pow: return std::pow(a, b);
    }
    return std::nan("");
}

// ---------------------------------------------------------------- lexer

struct Token {
    enum Type { number, ident, op, lparen, rparen, end } type;
    std::size_t offset;
    std::string_view text;
    double value = 0.0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void skip_blank() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }

    void advance() {
        skip_blank();
        if (pos_ >= src_.size()) {
            current_ = Token{Token::end, pos_, {}};
            return;
        }
        const std::size_t start = pos_;
        const char c = src_[pos_];
        if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
            std::size_t p = pos_;
            while (p < src_.size() && is_digit(src_[p])) ++p;
            if (p < src_.size() && src_[p] == '.') {
                ++p;
                while (p < src_.size() && is_digit(src_[p])) ++p;
            }
            if (p < src_.size() && (src_[p] == 'e' || src_[p] == 'E')) {
                std::size_t q = p + 1;
                if (q < src_.size() && (src_[q] == '+' || src_[q] == '-')) ++q;
                if (q < src_.size() && is_digit(src_[q])) {
                    while (q < src_.size() && is_digit(src_[q])) ++q;
                    p = q;
                }
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + p, v);
            if (ec != std::errc() || ptr != src_.data() + p)
                throw ParseError("malformed number '" + std::string(src_.substr(start, p - start)) + "'", start);
            pos_ = p;
            current_ = Token{Token::number, start, src_.substr(start, p - start), v};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t p = pos_ + 1;
            while (p < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[p])) || src_[p] == '_')) ++p;
            pos_ = p;
            current_ = Token{Token::ident, start, src_.substr(start, p - start)};
            return;
        }
        ++pos_;
        switch (c) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^': current_ = Token{Token::op, start, src_.substr(start, 1)}; return;
            case '(': current_ = Token{Token::lparen, start, src_.substr(start, 1)}; return;
            case ')': current_ = Token{Token::rparen, start, src_.substr(start, 1)}; return;
            default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_{Token::end, 0, {}};
};

// ---------------------------------------------------------------- parser

class Parser {
public:
    Parser(std::string_view src, const NameSet& vars) : lex_(src), vars_(vars) {}

    Expr parse_all() {
        if (lex_.peek().type == Token::end) throw ParseError("empty expression", lex_.peek().offset);
        Expr e = parse_expr();
        const Token& t = lex_.peek();
        if (t.type != Token::end) throw ParseError("unexpected '" + std::string(t.text) + "'", t.offset);
        return e;
    }

private:
    bool at_op(char c) const { return lex_.peek().type == Token::op && lex_.peek().text[0] == c; }

    Expr parse_expr() {
        Expr e = parse_term();
        while (at_op('+') || at_op('-')) {
            auto op = static_cast<BinaryOp>(lex_.take().text[0]);
            e = Expr::binary(op, std::move(e), parse_term());
        }
        return e;
    }

    Expr parse_term() {
        Expr e = parse_unary();
        while (at_op('*') || at_op('/')) {
            auto op = static_cast<BinaryOp>(lex_.take().text[0]);
            e = Expr::binary(op, std::move(e), parse_unary());
        }
        return e;
    }

    Expr parse_unary() {
        if (at_op('-')) {
            lex_.take();
            return Expr::negate(parse_unary());
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_atom();
        if (at_op('^')) {
            lex_.take();
            return Expr::binary(BinaryOp::pow, std::move(base), parse_unary());
        }
        return base;
    }

    Expr parse_atom() {
        Token t = lex_.take();
        switch (t.type) {
            case Token::number: return Expr::number(t.value);
            case Token::ident: {
                if (lex_.peek().type == Token::lparen) {
                    auto fn = lookup_function(t.text);
                    if (!fn) throw UnknownFunctionError(std::string(t.text), t.offset);
                    lex_.take();
                    Expr arg = parse_expr();
                    expect_rparen();
                    return Expr::call(*fn, std::move(arg));
                }
                if (vars_.find(t.text) == vars_.end()) throw UnknownVariableError(std::string(t.text), t.offset);
                return Expr::variable(std::string(t.text));
            }
            case Token::lparen: {
                Expr e = parse_expr();
                expect_rparen();
                return e;
            }
            case Token::end: throw ParseError("expected operand, found end of input", t.offset);
            default: throw ParseError("expected operand, found '" + std::string(t.text) + "'", t.offset);
        }
    }

    void expect_rparen() {
        const Token& t = lex_.peek();
        if (t.type != Token::rparen) {
            throw ParseError(t.type == Token::end ? std::string("expected ')', found end of input")
                                                  : "expected ')', found '" + std::string(t.text) + "'",
                             t.offset);
        }
        lex_.take();
    }

    Lexer lex_;
    const NameSet& vars_;
};

int precedence(const Expr& e) {
    switch (e.kind()) {
        case Expr::Kind::number:
        case Expr::Kind::variable:
        case Expr::Kind::call: return 5;
        case Expr::Kind::negate: return 3;
        case Expr::Kind::binary:
            switch (e.op()) {
                case BinaryOp::pow: return 4;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
            }
    }
    return 0;
}

void render(const Expr& e, std::string& out);

void render_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    render(e, out);
    if (wrap) out += ')';
}

void render(const Expr& e, std::string& out) {
    switch (e.kind()) {
        case Expr::Kind::number: {
            std::array<char, 64> buf{};
            auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), e.value());
            (void)ec;
            out.append(buf.data(), ptr);
            return;
        }
        case Expr::Kind::variable: out += e.name(); return;
        case Expr::Kind::negate:
            out += '-';
            render_wrapped(e.operand(), precedence(e.operand()) < 3, out);
            return;
        case Expr::Kind::call:
            out += function_name(e.function());
            out += '(';
            render(e.operand(), out);
            out += ')';
            return;
        case Expr::Kind::binary: {
            const int p = precedence(e);
            if (e.op() == BinaryOp::pow) {
                render_wrapped(e.lhs(), precedence(e.lhs()) < 5, out);
                out += '^';
                render_wrapped(e.rhs(), precedence(e.rhs()) < 3, out);
                return;
            }
            render_wrapped(e.lhs(), precedence(e.lhs()) < p, out);
            out += ' ';
            out += static_cast<char>(e.op());
            out += ' ';
            render_wrapped(e.rhs(), precedence(e.rhs()) <= p, out);
            return;
        }
    }
}

void collect(const Expr& e, NameSet& out) {
    switch (e.kind()) {
        case Expr::Kind::number: return;
        case Expr::Kind::variable: out.insert(e.name()); return;
        case Expr::Kind::negate:
        case Expr::Kind::call: collect(e.operand(), out); return;
        case Expr::Kind::binary:
            collect(e.lhs(), out);
            collect(e.rhs(), out);
            return;
    }
}

}  // namespace

Expr parse(std::string_view source, const NameSet& allowed_vars) {
    return Parser(source, allowed_vars).parse_all();
}

double eval(const Expr& e, const EvalContext& ctx) {
    switch (e.kind()) {
        case Expr::Kind::number: return e.value();
        case Expr::Kind::variable: {
            const double* v = ctx.find(e.name());
            if (!v) throw EvalError("unbound variable '" + e.name() + "'");
            return *v;
        }
        case Expr::Kind::negate: return -eval(e.operand(), ctx);
        case Expr::Kind::call: return apply_function(e.function(), eval(e.operand(), ctx));
        case Expr::Kind::binary: {
            const double a = eval(e.lhs(), ctx);
            const double b = eval(e.rhs(), ctx);
            return apply_binary(e.op(), a, b);
        }
    }
    return std::nan("");
}

NameSet free_variables(const Expr& e) {
    NameSet out;
    collect(e, out);
    return out;
}

std::string to_string(const Expr& e) {
    std::string out;
    render(e, out);
    return out;
}

// ---------------------------------------------------------------- compiled

CompiledExpr CompiledExpr::compile(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots) {
    CompiledExpr c;
    for (const auto& [name, slot] : slots) c.arity_ = std::max(c.arity_, slot + 1);
    c.emit(e, slots, 0);
    return c;
}

void CompiledExpr::emit(const Expr& e, const std::map<std::string, std::size_t, std::less<>>& slots,
                        std::size_t depth) {
    max_depth_ = std::max(max_depth_, depth + 1);
    switch (e.kind()) {
        case Expr::Kind::number: program_.push_back({Opcode::constant, 0, 0, e.value()}); return;
        case Expr::Kind::variable: {
            auto it = slots.find(e.name());
            if (it == slots.end()) throw EvalError("unbound variable '" + e.name() + "'");
            program_.push_back({Opcode::load, 0, it->second, 0.0});
            return;
        }
        case Expr::Kind::negate:
            emit(e.operand(), slots, depth);
            program_.push_back({Opcode::negate, 0, 0, 0.0});
            return;
        case Expr::Kind::call:
            emit(e.operand(), slots, depth);
            program_.push_back({Opcode::call, static_cast<unsigned char>(e.function()), 0, 0.0});
            return;
        case Expr::Kind::binary: {
            emit(e.lhs(), slots, depth);
            emit(e.rhs(), slots, depth + 1);
            Opcode code = Opcode::add;
            switch (e.op()) {
                case BinaryOp::add: code = Opcode::add; break;
                case BinaryOp::sub: code = Opcode::sub; break;
                case BinaryOp::mul: code = Opcode::mul; break;
                case BinaryOp::div: code = Opcode::div; break;
                case BinaryOp::pow: code = Opcode::pow; break;
            }
            program_.push_back({code, 0, 0, 0.0});
            return;
        }
    }
}

double CompiledExpr::operator()(std::span<const double> args) const {
    constexpr std::size_t kInline = 32;
    std::array<double, kInline> small;
    std::vector<double> large;
    double* stack = small.data();
    if (max_depth_ > kInline) {
        large.resize(max_depth_);
        stack = large.data();
    }
    std::size_t sp = 0;
    for (const Instr& in : program_) {
        switch (in.code) {
            case Opcode::constant: stack[sp++] = in.value; break;
            case Opcode::load: stack[sp++] = args[in.slot]; break;
            case Opcode::negate: stack[sp - 1] = -stack[sp - 1]; break;
            case Opcode::call: stack[sp - 1] = apply_function(static_cast<Function>(in.fn), stack[sp - 1]); break;
            case Opcode::add: --sp; stack[sp - 1] = stack[sp - 1] + stack[sp]; break;
            case Opcode::sub: --sp; stack[sp - 1] = stack[sp - 1] - stack[sp]; break;
            case Opcode::mul: --sp; stack[sp - 1] = stack[sp - 1] * stack[sp]; break;
            case Opcode::div: --sp; stack[sp - 1] = stack[sp - 1] / stack[sp]; break;
            case Opcode::pow: --sp; stack[sp - 1] = std::pow(stack[sp - 1], stack[sp]); break;
        }
    }
    return sp == 0 ? std::nan("") : stack[0];
}

}  // namespace gronwall
