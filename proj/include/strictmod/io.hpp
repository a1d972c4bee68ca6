#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "strictmod/modcat.hpp"
#include "strictmod/ramif.hpp"

namespace strictmod {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::pair<int, int> line_col(const std::string& text, std::size_t byte)
{
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else
            ++col;
    }
    return {line, col};
}

class LiteralParser {
public:
    LiteralParser(const std::string& s, FieldPtr k, int prec) : s_(s), k_(std::move(k)), prec_(prec) {}

    Series parse()
    {
        skip();
        bool first = true;
        while (pos_ < s_.size()) {
            bool neg = false;
            if (peek() == '+' || peek() == '-') {
                neg = get() == '-';
                skip();
            } else if (!first)
                fail("expected '+' or '-'");
            term(neg);
            first = false;
            skip();
        }
        if (first)
            fail("empty series literal");
        if (terms_.empty())
            return Series::zero(k_, prec_);
        int lo = terms_.begin()->first;
        std::vector<GaloisField::Code> c(static_cast<std::size_t>(std::max(0, terms_.rbegin()->first - lo + 1)), 0);
        for (auto [e, v] : terms_)
            c[static_cast<std::size_t>(e - lo)] = v;
        return Series::from_coeffs(k_, lo, std::move(c), prec_);
    }

private:
    const std::string& s_;
    FieldPtr k_;
    int prec_;
    std::size_t pos_ = 0;
    std::map<int, GaloisField::Code> terms_;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorKind::Parse, "series literal \"" + s_ + "\" at column " + std::to_string(pos_ + 1) + ": " + what);
    }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    char get() { return pos_ < s_.size() ? s_[pos_++] : '\0'; }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool accept(const std::string& w)
    {
        if (s_.compare(pos_, w.size(), w) == 0) {
            pos_ += w.size();
            skip();
            return true;
        }
        return false;
    }
    long long integer()
    {
        skip();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected an integer");
        long long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            v = v * 10 + (get() - '0');
            if (v > (1LL << 40))
                fail("integer too large");
        }
        skip();
        return neg ? -v : v;
    }
    int exponent()
    {
        if (!accept("^"))
            return 1;
        if (accept("(")) {
            long long v = integer();
            if (!accept(")"))
                fail("expected ')'");
            return static_cast<int>(v);
        }
        return static_cast<int>(integer());
    }
    void term(bool neg)
    {
        const GaloisField& F = *k_;
        if (accept("O(")) {
            if (!accept("pi"))
                fail("expected pi inside O(...)");
            prec_ = std::min(prec_, exponent());
            if (!accept(")"))
                fail("expected ')'");
            return;
        }
        GaloisField::Code c = 1;
        bool have_coeff = false;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            long long v = integer();
            c = F.from_int(v);
            have_coeff = true;
        } else if (peek() == 'g') {
            ++pos_;
            skip();
            int e = exponent();
            c = F.exp(static_cast<std::uint32_t>(((e % static_cast<int>(F.size() - 1)) + static_cast<int>(F.size() - 1)) %
                                                  static_cast<int>(F.size() - 1)));
            have_coeff = true;
        }
        int e = 0;
        if (have_coeff && accept("*")) {
            if (!accept("pi"))
                fail("expected pi after '*'");
            e = exponent();
        } else if (!have_coeff) {
            if (!accept("pi"))
                fail("expected a coefficient or pi");
            e = exponent();
        }
        if (neg)
            c = F.neg(c);
        auto& slot = terms_[e];
        slot = F.add(slot, c);
    }
};

} // namespace detail

inline Series parse_series_literal(const std::string& s, FieldPtr k, int prec)
{
    return detail::LiteralParser(s, std::move(k), prec).parse();
}

/// A series is a literal string, an integer, or a list of [exponent, coefficient] pairs
/// where a coefficient is an integer code, a literal like "g^2", or base-p coordinates.
inline Series series_from_json(const Json& j, FieldPtr k, int prec, const std::string& where)
{
    const GaloisField& F = *k;
    if (j.is_string())
        return parse_series_literal(j.get<std::string>(), k, prec);
    if (j.is_number_integer())
        return Series::constant(k, F.from_int(j.get<long long>()), prec);
    if (j.is_array()) {
        std::map<int, GaloisField::Code> terms;
        for (const auto& t : j) {
            if (!t.is_array() || t.size() != 2 || !t[0].is_number_integer())
                throw Error(ErrorKind::Parse, where + ": series terms must be [exponent, coefficient]");
            GaloisField::Code c;
            if (t[1].is_number_integer())
                c = F.from_int(t[1].get<long long>());
            else if (t[1].is_string())
                c = parse_series_literal(t[1].get<std::string>(), k, 1).coeff(0);
            else if (t[1].is_array()) {
                std::vector<int> co;
                for (const auto& x : t[1])
                    co.push_back(x.get<int>());
                co.resize(static_cast<std::size_t>(F.degree()), 0);
                c = F.from_coords(co);
            } else
                throw Error(ErrorKind::Parse, where + ": bad coefficient");
            auto& slot = terms[t[0].get<int>()];
            slot = F.add(slot, c);
        }
        if (terms.empty())
            return Series::zero(k, prec);
        int lo = terms.begin()->first;
        std::vector<GaloisField::Code> c(static_cast<std::size_t>(terms.rbegin()->first - lo + 1), 0);
        for (auto [e, v] : terms)
            c[static_cast<std::size_t>(e - lo)] = v;
        return Series::from_coeffs(k, lo, std::move(c), prec);
    }
    throw Error(ErrorKind::Parse, where + ": expected a series");
}

inline SeriesMatrix matrix_from_json(const Json& j, FieldPtr k, int prec, const std::string& where)
{
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw Error(ErrorKind::Parse, where + ": expected a non-empty list of rows");
    std::size_t r = j.size(), c = j[0].size();
    SeriesMatrix M(k, r, c, prec);
    for (std::size_t i = 0; i < r; ++i) {
        if (!j[i].is_array() || j[i].size() != c)
            throw Error(ErrorKind::Parse, where + ": row " + std::to_string(i) + " has the wrong length");
        for (std::size_t jj = 0; jj < c; ++jj)
            M(i, jj) = series_from_json(j[i][jj], k, prec, where + "[" + std::to_string(i) + "][" + std::to_string(jj) + "]");
    }
    return M;
}

inline ExtensionTower tower_from_json(const Json& j, int p)
{
    if (!j.is_array())
        throw Error(ErrorKind::Parse, "tower: expected a list of steps");
    ExtensionTower t{p, {}};
    for (const auto& s : j) {
        std::string type = s.value("type", "");
        if (type == "unramified")
            t.steps.push_back(Unramified{s.value("degree", 1)});
        else if (type == "tame")
            t.steps.push_back(Tame{s.value("degree", 1)});
        else if (type == "artin-schreier" || type == "as")
            t.steps.push_back(ArtinSchreier{s.value("degree", 1LL), s.value("m", 1)});
        else
            throw Error(ErrorKind::Parse, "tower: unknown step type \"" + type + "\"");
    }
    t.validate();
    return t;
}

/// Precision default: the STRICTMOD_PREC environment variable, else 20.
inline int default_precision()
{
    if (const char* v = std::getenv("STRICTMOD_PREC")) {
        char* end = nullptr;
        long x = std::strtol(v, &end, 10);
        if (end && *end == '\0' && x >= 2 && x <= 4096)
            return static_cast<int>(x);
    }
    return 20;
}

inline Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Parse, "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw Error(ErrorKind::Parse, path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": JSON syntax error");
    }
}

struct ModuleInput {
    Json raw;
    BaseData base;
    std::optional<SigmaModule> module;
    std::optional<ExtensionTower> tower;
};

/// prec_override <= 0 means: the file's "prec", else the default.
inline ModuleInput module_input_from_json(const Json& j, int prec_override = 0)
{
    ModuleInput in;
    in.raw = j;
    if (!j.is_object())
        throw Error(ErrorKind::Parse, "input must be a JSON object");
    try {
        int p = j.at("p").get<int>();
        int n0 = j.value("N0", 1);
        int m = j.value("k_deg", 1);
        int prec = prec_override > 0 ? prec_override : j.value("prec", default_precision());
        if (prec < 2)
            throw Error(ErrorKind::Parse, "prec must be at least 2");
        std::vector<int> poly;
        if (j.contains("k_poly"))
            poly = j["k_poly"].get<std::vector<int>>();
        FieldPtr k = make_field(p, n0 * m, poly);
        Series pi0 = j.contains("pi0") ? series_from_json(j["pi0"], k, prec, "pi0") : Series::monomial(k, 1, 1, prec);
        in.base = make_base(p, n0, m, pi0, prec, k);
        if (j.contains("C")) {
            SeriesMatrix C = matrix_from_json(j["C"], k, prec, "C");
            SeriesMatrix D = j.contains("D") ? matrix_from_json(j["D"], k, prec, "D") : SeriesMatrix(k, C.rows(), C.cols(), prec);
            in.module = validate_module(in.base, C, D);
        }
        if (j.contains("tower"))
            in.tower = tower_from_json(j["tower"], p);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("input field has the wrong type: ") + e.what());
    }
    return in;
}

inline ModuleInput load_module_input(const std::string& path, int prec_override = 0)
{
    return module_input_from_json(read_json_file(path), prec_override);
}

inline std::string code_string(const GaloisField& F, GaloisField::Code c) { return Series::code_to_string(F, c); }

inline Json to_json(const Series& s) { return s.to_string(); }

inline Json to_json(const SeriesMatrix& M)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < M.cols(); ++j)
            r.push_back(M(i, j).to_string());
        rows.push_back(r);
    }
    return rows;
}

inline Json to_json(const KMatrix& M)
{
    Json rows = Json::array();
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < M.cols(); ++j)
            r.push_back(code_string(*M.field(), M(i, j)));
        rows.push_back(r);
    }
    return rows;
}

inline Json to_json(const Rational& r) { return to_string(r); }

inline Json to_json(const PLFunction& f)
{
    Json b = Json::array(), s = Json::array();
    for (const auto& x : f.breaks())
        b.push_back(to_string(x));
    for (const auto& x : f.slopes())
        s.push_back(to_string(x));
    return Json{{"breaks", b}, {"slopes", s}};
}

inline Json to_json(const BaseData& b)
{
    return Json{{"p", b.p}, {"q", b.q}, {"N0", b.n0}, {"k_deg", b.m}, {"e", b.e()}, {"pi0", to_json(b.pi0)}, {"prec", b.prec}};
}

inline Json certificate_json(const SigmaModule& M)
{
    const Certificate& c = M.cert;
    Json j{{"integral", c.integral},
           {"det_nonzero", c.det_nonzero.ok},
           {"det", to_json(c.det)},
           {"nilpotent", c.nilpotent.ok},
           {"semilinear", c.semilinear.ok},
           {"strict", c.strict.ok},
           {"remark_b", c.remark_b.ok},
           {"deciding_precision", Json{{"det_nonzero", c.det_nonzero.prec},
                                       {"nilpotent", c.nilpotent.prec},
                                       {"semilinear", c.semilinear.prec},
                                       {"strict", c.strict.prec},
                                       {"remark_b", c.remark_b.prec}}}};
    if (c.has_B)
        j["B"] = to_json(c.B);
    Json f = Json::array();
    for (const auto& s : c.failures)
        f.push_back(s);
    j["failures"] = f;
    j["valid"] = c.valid();
    return j;
}

} // namespace strictmod
