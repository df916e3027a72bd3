#pragma once

// Arrangement files, scalar strings, and result records.
//
// Arrangement JSON:
//   { "rank": r, "functionals": [ { "direction": [ints], "constant": "p/q" | {"re": "p/q", "im": "p/q"},
//                                   "name": optional } ] }
// Scalar strings are sums of terms built from rationals, pi, i and zetaN
// (the primitive N-th root of unity e^{2 pi i/N}) with + - * / ^ and
// parentheses; this covers everything ExactScalar::str emits.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latsum/lattice.hpp"
#include "latsum/scalar.hpp"

namespace latsum {

using json = nlohmann::json;

namespace detail {

inline Q checked_q(const std::string& s) {
    try {
        return parse_q(s);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
}

inline Q json_rational(const json& j, const char* what) {
    if (j.is_number_integer()) return Q(j.get<long>());
    if (j.is_string()) return checked_q(j.get<std::string>());
    throw InvalidInput(std::string(what) + " must be an integer or a \"p/q\" string");
}

inline json rational_json(const Q& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return q.get_num().get_si();
    return q.get_str();
}

}  // namespace detail

inline Arrangement arrangement_from_json(const json& j) {
    if (!j.is_object() || !j.contains("rank") || !j.contains("functionals"))
        throw InvalidInput("arrangement needs \"rank\" and \"functionals\"");
    int r = j.at("rank").get<int>();
    std::vector<Functional> fs;
    for (auto& f : j.at("functionals")) {
        Functional fn;
        for (auto& d : f.at("direction")) fn.direction.push_back(Z(d.get<long>()));
        if (f.contains("constant")) {
            const json& c = f.at("constant");
            if (c.is_object()) {
                fn.constant.re = c.contains("re") ? detail::json_rational(c.at("re"), "re") : Q(0);
                fn.constant.im = c.contains("im") ? detail::json_rational(c.at("im"), "im") : Q(0);
            } else {
                fn.constant.re = detail::json_rational(c, "constant");
            }
        }
        if (f.contains("name")) fn.name = f.at("name").get<std::string>();
        fs.push_back(std::move(fn));
    }
    return Arrangement(r, std::move(fs));
}

inline json arrangement_to_json(const Arrangement& a) {
    json fs = json::array();
    for (auto& f : a.functionals()) {
        json d = json::array();
        for (auto& z : f.direction) d.push_back(z.get_si());
        json c = f.constant.im == 0 ? detail::rational_json(f.constant.re)
                                    : json{{"re", f.constant.re.get_str()}, {"im", f.constant.im.get_str()}};
        fs.push_back({{"direction", d}, {"constant", c}, {"name", f.name}});
    }
    return {{"rank", a.rank()}, {"functionals", fs}};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

inline Arrangement load_arrangement(const std::string& path) {
    try {
        return arrangement_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

// "2,2,2" -> {2,2,2}
inline std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw InvalidInput("not an integer: '" + item + "'");
        }
        if (used != item.size()) throw InvalidInput("not an integer: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidInput("empty list");
    return out;
}

// "1/3,0" -> {1/3, 0}; decimals are read exactly
inline QVec parse_rational_list(const std::string& s) {
    QVec out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(detail::checked_q(item));
    if (out.empty()) throw InvalidInput("empty list");
    return out;
}

// ---------------------------------------------------------------- scalars

class ScalarParser {
public:
    explicit ScalarParser(std::string s) : s_(std::move(s)) {}

    ExactScalar parse() {
        ExactScalar v = expr();
        skip();
        if (p_ != s_.size()) fail("unexpected '" + std::string(1, s_[p_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw InvalidInput("cannot parse scalar '" + s_ + "' at " + std::to_string(p_) + ": " + why);
    }
    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }
    bool eat(char c) {
        skip();
        if (p_ < s_.size() && s_[p_] == c) {
            ++p_;
            return true;
        }
        return false;
    }

    ExactScalar expr() {
        ExactScalar v = term();
        for (;;) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }
    ExactScalar term() {
        ExactScalar v = unary();
        for (;;) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                ExactScalar d = unary();
                if (d.is_zero()) fail("division by zero");
                v = v / d;
            } else {
                return v;
            }
        }
    }
    ExactScalar unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    ExactScalar power() {
        ExactScalar b = atom();
        if (!eat('^')) return b;
        skip();
        bool neg = false;
        if (eat('-')) neg = true;
        skip();
        std::size_t start = p_;
        while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
        if (start == p_) fail("exponent expected");
        long e = std::stol(s_.substr(start, p_ - start));
        ExactScalar r(1);
        for (long i = 0; i < e; ++i) r = r * b;
        if (neg) {
            if (r.is_zero()) fail("division by zero");
            r = r.inverse();
        }
        return r;
    }
    ExactScalar atom() {
        skip();
        if (eat('(')) {
            ExactScalar v = expr();
            if (!eat(')')) fail("')' expected");
            return v;
        }
        if (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) {
            std::size_t start = p_;
            while (p_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[p_])) || s_[p_] == '.')) ++p_;
            if (p_ < s_.size() && (s_[p_] == 'e' || s_[p_] == 'E')) {
                std::size_t q = p_ + 1;
                if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
                if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                    p_ = q;
                    while (p_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p_]))) ++p_;
                }
            }
            return ExactScalar(detail::checked_q(s_.substr(start, p_ - start)));
        }
        std::size_t start = p_;
        while (p_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[p_]))) ++p_;
        std::string w = s_.substr(start, p_ - start);
        if (w == "pi") return ExactScalar::pi_pow(1);
        if (w == "i") return ExactScalar(Cyclo::root(4, 1));
        if (w.rfind("zeta", 0) == 0 && w.size() > 4) {
            long n = std::stol(w.substr(4));
            if (n < 1 || n > (1l << 30)) fail("bad root order");
            return ExactScalar(Cyclo::root(static_cast<u32>(n), 1));
        }
        fail(w.empty() ? "operand expected" : "unknown symbol '" + w + "'");
    }

    std::string s_;
    std::size_t p_ = 0;
};

inline ExactScalar parse_scalar(const std::string& s) { return ScalarParser(s).parse(); }

// ------------------------------------------------------------ result record

struct ResultRecord {
    std::string S, C, mode;
    int order = 0;
    unsigned long N_cyclotomic = 0;
    double timing_ms = 0;
    json extra = json::object();
};

inline json to_json(const ResultRecord& r) {
    json j = {{"S", r.S}, {"C", r.C}, {"mode", r.mode}, {"order", r.order}, {"N_cyclotomic", r.N_cyclotomic},
              {"timing_ms", r.timing_ms}};
    for (auto& [k, v] : r.extra.items()) j[k] = v;
    return j;
}

inline ResultRecord record_from_json(const json& j) {
    ResultRecord r;
    r.S = j.at("S").get<std::string>();
    r.C = j.at("C").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.order = j.at("order").get<int>();
    r.N_cyclotomic = j.at("N_cyclotomic").get<unsigned long>();
    r.timing_ms = j.at("timing_ms").get<double>();
    for (auto& [k, v] : j.items())
        if (k != "S" && k != "C" && k != "mode" && k != "order" && k != "N_cyclotomic" && k != "timing_ms")
            r.extra[k] = v;
    return r;
}

}  // namespace latsum
