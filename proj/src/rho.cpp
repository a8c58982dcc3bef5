#include "binet/rho.hpp"

#include "binet/syntax.hpp"
#include "rho_rules_text.inc"

#include <cctype>
#include <map>
#include <optional>

namespace binet {

RhoTerm RhoTerm::variable(std::string name) {
    RhoTerm t;
    t.kind = Kind::Variable;
    t.name = std::move(name);
    return t;
}

RhoTerm RhoTerm::constructor(std::string name) {
    RhoTerm t;
    t.kind = Kind::Constructor;
    t.name = std::move(name);
    return t;
}

RhoTerm RhoTerm::application(RhoTerm function, RhoTerm argument) {
    RhoTerm t;
    t.kind = Kind::Application;
    t.left = std::make_shared<const RhoTerm>(std::move(function));
    t.right = std::make_shared<const RhoTerm>(std::move(argument));
    return t;
}

RhoTerm RhoTerm::abstraction(RhoTerm pattern, RhoTerm body) {
    RhoTerm t;
    t.kind = Kind::Abstraction;
    t.left = std::make_shared<const RhoTerm>(std::move(pattern));
    t.right = std::make_shared<const RhoTerm>(std::move(body));
    return t;
}

bool RhoTerm::operator==(const RhoTerm &other) const {
    if (kind != other.kind || name != other.name)
        return false;
    if (!left)
        return true;
    return *left == *other.left && *right == *other.right;
}

namespace {

class RhoParser {
  public:
    explicit RhoParser(std::string_view src) : src_(src) { advance(); }

    RhoTerm run() {
        RhoTerm t = term();
        if (tok_ != Tok::End)
            fail("unexpected input");
        return t;
    }

  private:
    enum class Tok { Ident, LParen, RParen, Arrow, End };

    std::string_view src_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    Tok tok_ = Tok::End;
    std::string text_;
    std::size_t tok_line_ = 1, tok_col_ = 1;

    [[noreturn]] void fail(const std::string &msg) const {
        throw ParseError(tok_line_, tok_col_, msg);
    }

    void bump(std::size_t n) {
        for (std::size_t i = 0; i < n; ++i, ++pos_) {
            if (src_[pos_] == '\n') {
                ++line_;
                col_ = 1;
            } else {
                ++col_;
            }
        }
    }

    void advance() {
        while (pos_ < src_.size()) {
            if (src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    bump(1);
            } else if (std::isspace(static_cast<unsigned char>(src_[pos_]))) {
                bump(1);
            } else {
                break;
            }
        }
        tok_line_ = line_;
        tok_col_ = col_;
        if (pos_ >= src_.size()) {
            tok_ = Tok::End;
            return;
        }
        std::string_view rest = src_.substr(pos_);
        if (rest.substr(0, 2) == "->") {
            tok_ = Tok::Arrow;
            bump(2);
        } else if (rest.substr(0, 3) == "\xE2\x86\x92") {
            tok_ = Tok::Arrow;
            bump(3);
        } else if (rest[0] == '(') {
            tok_ = Tok::LParen;
            bump(1);
        } else if (rest[0] == ')') {
            tok_ = Tok::RParen;
            bump(1);
        } else if (std::isalpha(static_cast<unsigned char>(rest[0])) || rest[0] == '_') {
            std::size_t n = 0;
            while (n < rest.size() && (std::isalnum(static_cast<unsigned char>(rest[n])) ||
                                       rest[n] == '_' || rest[n] == '\''))
                ++n;
            tok_ = Tok::Ident;
            text_ = std::string(rest.substr(0, n));
            bump(n);
        } else {
            fail(std::string("unexpected character '") + rest[0] + "'");
        }
    }

    bool starts_atom() const { return tok_ == Tok::Ident || tok_ == Tok::LParen; }

    RhoTerm term() {
        RhoTerm lhs = application();
        if (tok_ == Tok::Arrow) {
            advance();
            return RhoTerm::abstraction(std::move(lhs), term());
        }
        return lhs;
    }

    RhoTerm application() {
        RhoTerm t = atom();
        while (starts_atom())
            t = RhoTerm::application(std::move(t), atom());
        return t;
    }

    RhoTerm atom() {
        if (tok_ == Tok::Ident) {
            std::string name = text_;
            advance();
            if (std::isupper(static_cast<unsigned char>(name[0])))
                return RhoTerm::constructor(std::move(name));
            return RhoTerm::variable(std::move(name));
        }
        if (tok_ == Tok::LParen) {
            advance();
            RhoTerm t = term();
            if (tok_ != Tok::RParen)
                fail("expected ')'");
            advance();
            return t;
        }
        fail("expected a variable, a constructor or '('");
    }
};

std::string print(const RhoTerm &t, bool function_position, bool argument_position) {
    switch (t.kind) {
    case RhoTerm::Kind::Variable:
    case RhoTerm::Kind::Constructor:
        return t.name;
    case RhoTerm::Kind::Application: {
        std::string s = print(*t.left, true, false) + " " + print(*t.right, false, true);
        return argument_position ? "(" + s + ")" : s;
    }
    case RhoTerm::Kind::Abstraction: {
        std::string s = print(*t.left, false, false) + " -> " + print(*t.right, false, false);
        if (t.left->kind == RhoTerm::Kind::Abstraction)
            s = "(" + print(*t.left, false, false) + ") -> " + print(*t.right, false, false);
        return function_position || argument_position ? "(" + s + ")" : s;
    }
    }
    return {};
}

class Compiler {
  public:
    CompiledRho run(const RhoTerm &t) {
        CompiledRho out;
        out.output = compile(t);
        out.net.agents = std::move(agents_);
        out.net.signature = std::move(signature_);
        return out;
    }

  private:
    struct Binding {
        Label port;
        bool used = false;
    };

    std::vector<Agent> agents_;
    Signature signature_;
    std::map<std::string, Binding> scope_;
    std::size_t next_ = 0;

    Label fresh() { return "n" + std::to_string(next_++); }

    Agent &emit(Agent a) {
        signature_.emplace(a.symbol, a.arity());
        agents_.push_back(std::move(a));
        return agents_.back();
    }

    Label compile(const RhoTerm &t) {
        switch (t.kind) {
        case RhoTerm::Kind::Constructor: {
            Label out = fresh();
            emit({t.name, out, {}, {}, {}});
            return out;
        }
        case RhoTerm::Kind::Variable: {
            auto it = scope_.find(t.name);
            if (it == scope_.end())
                throw RhoCompileError("free variable '" + t.name + "'");
            if (it->second.used)
                throw RhoCompileError("variable '" + t.name +
                                      "' is used more than once (patterns must be linear)");
            it->second.used = true;
            return it->second.port;
        }
        case RhoTerm::Kind::Application: {
            Label f = compile(*t.left);
            Label a = compile(*t.right);
            Label out = fresh();
            emit({"App", f, {out, a}, {}, {}});
            return out;
        }
        case RhoTerm::Kind::Abstraction:
            return abstraction(*t.left, *t.right);
        }
        return {};
    }

    Label abstraction(const RhoTerm &pattern, const RhoTerm &body) {
        Label out = fresh();
        Label p = fresh();
        std::vector<Agent> nested;
        if (pattern.kind == RhoTerm::Kind::Variable) {
            auto saved = scope_.find(pattern.name) == scope_.end()
                             ? std::nullopt
                             : std::optional<Binding>(scope_[pattern.name]);
            scope_[pattern.name] = {p, false};
            Label b = compile(body);
            if (!scope_[pattern.name].used)
                emit({"eps", p, {}, {}, {}});
            if (saved)
                scope_[pattern.name] = *saved;
            else
                scope_.erase(pattern.name);
            emit({"Abs", out, {b}, {p}, {}});
            return out;
        }
        if (pattern.kind == RhoTerm::Kind::Constructor) {
            Agent c{pattern.name, p, {}, {}, {}};
            signature_.emplace(c.symbol, c.arity());
            Label b = compile(body);
            emit({"Abs", out, {b}, {p}, {std::move(c)}});
            return out;
        }
        throw RhoCompileError("unsupported pattern '" + print_rho(pattern) +
                              "': only a variable or a constructor may be abstracted over");
    }
};

} // namespace

RhoTerm parse_rho(std::string_view text) { return RhoParser(text).run(); }

std::string print_rho(const RhoTerm &term) { return print(term, false, false); }

CompiledRho compile_rho(const RhoTerm &term) { return Compiler().run(term); }

std::string_view rho_rules_source(EpsilonVariant variant) {
    return variant == EpsilonVariant::Optimized ? kRhoRulesText : kRhoNaiveRulesText;
}

RuleSet rho_rules(EpsilonVariant variant) { return parse_rules(rho_rules_source(variant)); }

} // namespace binet
