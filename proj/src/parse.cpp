#include "heightlab/parse.hpp"

#include <cctype>
#include <utility>

#include "heightlab/errors.hpp"

namespace heightlab {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rat parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    std::string_view num = s, den = "1";
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den))
        throw ParseError("malformed rational '" + std::string(text) + "'");
    Int n{std::string(num)};
    Int d{std::string(den)};
    if (d == 0)
        throw ParseError("zero denominator in '" + std::string(text) + "'");
    if (neg) n = -n;
    Rat r(n, d);
    r.canonicalize();
    return r;
}

ProjPoint parse_point(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    if (s == "inf" || s == "infinity" || s == "oo")
        return ProjPoint::infinity();
    return ProjPoint::from_rational(parse_rational(s));
}

namespace {

// Recursive-descent parser over rational functions of t. Every value is a
// fraction of polynomials, so "/" works uniformly for coefficients (1/2) and
// for the map's fraction bar.
struct MapParser {
    std::string_view s;
    std::size_t pos = 0;

    explicit MapParser(std::string_view text) : s(text) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("map parse error at position " + std::to_string(pos) +
                         ": " + what);
    }

    void skip_ws() {
        while (pos < s.size() &&
               std::isspace(static_cast<unsigned char>(s[pos])))
            ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }

    struct Frac {
        RatPoly num, den; // den nonzero
    };

    static Frac make(RatPoly n, RatPoly d) { return {std::move(n), std::move(d)}; }

    Frac add(const Frac& a, const Frac& b) {
        return make(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    Frac sub(const Frac& a, const Frac& b) {
        return make(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    Frac mul(const Frac& a, const Frac& b) {
        return make(a.num * b.num, a.den * b.den);
    }
    Frac div(const Frac& a, const Frac& b) {
        if (b.num.is_zero()) fail("division by the zero polynomial");
        return make(a.num * b.den, a.den * b.num);
    }

    Frac parse_expr() {
        Frac acc = parse_term();
        for (;;) {
            if (eat('+'))
                acc = add(acc, parse_term());
            else if (eat('-'))
                acc = sub(acc, parse_term());
            else
                return acc;
        }
    }

    Frac parse_term() {
        Frac acc = parse_factor();
        for (;;) {
            char c = peek();
            if (c == '*') {
                ++pos;
                acc = mul(acc, parse_factor());
            } else if (c == '/') {
                ++pos;
                acc = div(acc, parse_factor());
            } else if (c == 't' || c == '(') {
                acc = mul(acc, parse_factor()); // juxtaposition: "2t", "3(t+1)"
            } else {
                return acc;
            }
        }
    }

    Frac parse_factor() {
        Frac base = parse_atom();
        if (eat('^')) {
            skip_ws();
            bool neg = eat('-');
            if (!std::isdigit(static_cast<unsigned char>(peek())))
                fail("expected an integer exponent");
            unsigned long e = 0;
            while (pos < s.size() &&
                   std::isdigit(static_cast<unsigned char>(s[pos]))) {
                e = e * 10 + static_cast<unsigned long>(s[pos] - '0');
                if (e > 4096) fail("exponent too large");
                ++pos;
            }
            Frac p = make(base.num.pow(e), base.den.pow(e));
            if (neg) p = div(make(RatPoly(Rat(1)), RatPoly(Rat(1))), p);
            return p;
        }
        return base;
    }

    Frac parse_atom() {
        char c = peek();
        if (c == '-') {
            ++pos;
            Frac f = parse_factor();
            return make(-f.num, f.den);
        }
        if (c == '+') {
            ++pos;
            return parse_factor();
        }
        if (c == '(') {
            ++pos;
            Frac f = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (c == 't') {
            ++pos;
            return make(RatPoly::t(), RatPoly(Rat(1)));
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Int n(0);
            while (pos < s.size() &&
                   std::isdigit(static_cast<unsigned char>(s[pos]))) {
                n = n * 10 + (s[pos] - '0');
                ++pos;
            }
            return make(RatPoly(Rat(n)), RatPoly(Rat(1)));
        }
        fail(c == '\0' ? "unexpected end of input"
                       : std::string("unexpected character '") + c + "'");
    }
};

} // namespace

RationalMap1D parse_rational_map(std::string_view text, std::string* warning) {
    MapParser p(text);
    MapParser::Frac f = p.parse_expr();
    p.skip_ws();
    if (p.pos != p.s.size()) p.fail("trailing input");
    return RationalMap1D::normalized(f.num, f.den, warning);
}

} // namespace heightlab
