// sexpr.hpp — reader and writer for the parenthesized symbolic file formats.
#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scwb {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, int line, int col)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line), col(col) {}
    int line;
    int col;
};

// Either an atom (symbol or number, stored as text) or a list.
struct Sexpr {
    bool is_atom = false;
    std::string atom;
    std::vector<Sexpr> items;
    int line = 0;
    int col = 0;

    bool is_list() const { return !is_atom; }
    std::size_t size() const { return items.size(); }
    const Sexpr& at(std::size_t i) const {
        if (i >= items.size()) throw ParseError("expected at least " + std::to_string(i + 1) + " items", line, col);
        return items[i];
    }
    bool head_is(const std::string& sym) const {
        return is_list() && !items.empty() && items[0].is_atom && items[0].atom == sym;
    }
    const std::string& atom_text() const {
        if (!is_atom) throw ParseError("expected an atom", line, col);
        return atom;
    }
    uint32_t as_nat() const {
        const std::string& s = atom_text();
        if (s.empty()) throw ParseError("expected a natural number", line, col);
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError("expected a natural number, got '" + s + "'", line, col);
        return static_cast<uint32_t>(std::stoul(s));
    }
};

namespace detail {

class SexprReader {
public:
    explicit SexprReader(const std::string& text) : text_(text) {}

    Sexpr read_one() {
        skip_ws();
        Sexpr e = read_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("trailing content after expression");
        return e;
    }

    std::vector<Sexpr> read_all() {
        std::vector<Sexpr> out;
        skip_ws();
        while (pos_ < text_.size()) {
            out.push_back(read_expr());
            skip_ws();
        }
        return out;
    }

private:
    Sexpr read_expr() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            Sexpr e;
            e.line = line_;
            e.col = col_;
            advance();
            skip_ws();
            while (pos_ < text_.size() && text_[pos_] != ')') {
                e.items.push_back(read_expr());
                skip_ws();
            }
            if (pos_ >= text_.size()) fail("unterminated list");
            advance(); // ')'
            return e;
        }
        if (text_[pos_] == ')') fail("unexpected ')'");
        Sexpr e;
        e.is_atom = true;
        e.line = line_;
        e.col = col_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
            e.atom.push_back(text_[pos_]);
            advance();
        }
        return e;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') { // comment to end of line
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line_, col_); }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace detail

inline Sexpr parse_sexpr(const std::string& text) { return detail::SexprReader(text).read_one(); }
inline std::vector<Sexpr> parse_sexprs(const std::string& text) { return detail::SexprReader(text).read_all(); }

inline void write_sexpr(std::ostream& os, const Sexpr& e) {
    if (e.is_atom) {
        os << e.atom;
        return;
    }
    os << '(';
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) os << ' ';
        write_sexpr(os, e.items[i]);
    }
    os << ')';
}

inline std::string to_string(const Sexpr& e) {
    std::ostringstream os;
    write_sexpr(os, e);
    return os.str();
}

inline Sexpr atom(std::string s) {
    Sexpr e;
    e.is_atom = true;
    e.atom = std::move(s);
    return e;
}

inline Sexpr list(std::vector<Sexpr> items) {
    Sexpr e;
    e.items = std::move(items);
    return e;
}

} // namespace scwb
