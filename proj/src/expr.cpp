#include "chebysolve/expr.hpp"

#include <cctype>
#include <cmath>
#include <memory>

namespace cheby {

namespace {

struct Node {
    enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp };
    Kind kind;
    double value = 0.0;  // Const
    int var = 0;         // Var
    std::shared_ptr<Node> a, b;

    double eval(const Vec& x) const {
        switch (kind) {
            case Kind::Const: return value;
            case Kind::Var: return x[var];
            case Kind::Add: return a->eval(x) + b->eval(x);
            case Kind::Sub: return a->eval(x) - b->eval(x);
            case Kind::Mul: return a->eval(x) * b->eval(x);
            case Kind::Div: return a->eval(x) / b->eval(x);
            case Kind::Pow: return std::pow(a->eval(x), b->eval(x));
            case Kind::Neg: return -a->eval(x);
            case Kind::Sin: return std::sin(a->eval(x));
            case Kind::Cos: return std::cos(a->eval(x));
            case Kind::Exp: return std::exp(a->eval(x));
        }
        return 0.0;
    }
};

using NodePtr = std::shared_ptr<Node>;

NodePtr make(Node::Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

class Parser {
public:
    Parser(const std::string& text, int m) : s_(text), m_(m) {}

    NodePtr parse() {
        auto n = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw SolverError(SolverError::Code::InvalidInput,
                              "expression: trailing input at '" + s_.substr(pos_) + "'");
        return n;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    NodePtr expr() {
        auto n = term();
        for (;;) {
            if (eat('+')) n = make(Node::Kind::Add, n, term());
            else if (eat('-')) n = make(Node::Kind::Sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        auto n = unary();
        for (;;) {
            if (eat('*')) n = make(Node::Kind::Mul, n, unary());
            else if (eat('/')) n = make(Node::Kind::Div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Node::Kind::Neg, unary());
        if (eat('+')) return unary();
        return power();
    }

    NodePtr power() {
        auto base = atom();
        if (eat('^')) return make(Node::Kind::Pow, base, unary());  // right assoc
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (eat('(')) {
            auto n = expr();
            if (!eat(')'))
                throw SolverError(SolverError::Code::InvalidInput, "expression: missing ')'");
            return n;
        }
        char c = peek();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw SolverError(SolverError::Code::InvalidInput,
                          std::string("expression: unexpected character '") + c + "'");
    }

    NodePtr number() {
        size_t end = pos_;
        while (end < s_.size() &&
               (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                s_[end] == 'e' || s_[end] == 'E' ||
                ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
                 (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
            ++end;
        auto n = make(Node::Kind::Const);
        n->value = std::stod(s_.substr(pos_, end - pos_));
        pos_ = end;
        return n;
    }

    NodePtr identifier() {
        size_t end = pos_;
        while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end]))))
            ++end;
        std::string id = s_.substr(pos_, end - pos_);
        pos_ = end;
        if (id == "sin" || id == "cos" || id == "exp") {
            if (!eat('('))
                throw SolverError(SolverError::Code::InvalidInput,
                                  "expression: expected '(' after " + id);
            auto arg = expr();
            if (!eat(')'))
                throw SolverError(SolverError::Code::InvalidInput, "expression: missing ')'");
            Node::Kind k = id == "sin"   ? Node::Kind::Sin
                           : id == "cos" ? Node::Kind::Cos
                                         : Node::Kind::Exp;
            return make(k, arg);
        }
        if (id == "x" || (id.size() > 1 && id[0] == 'x')) {
            int var = 1;
            if (id.size() > 1) var = std::stoi(id.substr(1));
            if (var < 1 || var > m_)
                throw SolverError(SolverError::Code::InvalidInput,
                                  "expression: variable " + id + " out of range for m");
            auto n = make(Node::Kind::Var);
            n->var = var - 1;
            return n;
        }
        throw SolverError(SolverError::Code::InvalidInput, "expression: unknown name " + id);
    }

    const std::string& s_;
    int m_;
    size_t pos_ = 0;
};

}  // namespace

ExplicitTarget parse_expression_target(const std::string& text, int m) {
    Parser parser(text, m);
    std::shared_ptr<Node> root = parser.parse();
    ExplicitTarget t;
    t.name = text;
    t.f = [root](const Vec& x) { return root->eval(x); };
    return t;
}

}  // namespace cheby
