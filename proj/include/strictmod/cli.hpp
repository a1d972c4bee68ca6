#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "strictmod/divisible.hpp"
#include "strictmod/etale.hpp"
#include "strictmod/hopf.hpp"
#include "strictmod/io.hpp"
#include "strictmod/points.hpp"
#include "strictmod/ramif.hpp"
#include "strictmod/sh.hpp"

namespace strictmod {

struct CliOptions {
    std::string command;
    std::vector<std::string> inputs;
    int prec = 0; // 0: file value, then STRICTMOD_PREC, then 20
    std::optional<std::string> out;
    std::size_t cap = HopfResidueAlgebra::kDefaultCap;
    std::optional<std::string> tower_file;
    std::optional<std::string> break_value;
};

struct CliResult {
    int exit_code = 0;
    std::string text;
};

inline const std::vector<std::string>& cli_commands()
{
    static const std::vector<std::string> c{"validate", "roundtrip", "points", "character", "gap",
                                            "ramify",   "bound",     "divisible", "embed", "sh"};
    return c;
}

/// Human lines plus a machine block; the verdict is the conjunction of all checks.
class Report {
public:
    explicit Report(const std::string& command) : json_{{"command", command}} {}

    void line(const std::string& s) { lines_.push_back(s); }
    void set(const std::string& key, Json value) { json_[key] = std::move(value); }
    Json& json() { return json_; }

    void check(const std::string& name, bool ok)
    {
        checks_[name] = ok;
        line("  [" + std::string(ok ? "pass" : "FAIL") + "] " + name);
        pass_ = pass_ && ok;
    }

    bool pass() const { return pass_; }

    std::string render()
    {
        json_["checks"] = checks_;
        json_["verdict"] = pass_ ? "PASS" : "FAIL";
        std::ostringstream os;
        os << "strictmod " << json_["command"].get<std::string>() << "\n";
        for (const auto& l : lines_)
            os << l << "\n";
        os << "verdict: " << (pass_ ? "PASS" : "FAIL") << "\n";
        os << "--- json ---\n" << json_.dump(2) << "\n";
        return os.str();
    }

private:
    Json json_;
    Json checks_ = Json::object();
    std::vector<std::string> lines_;
    bool pass_ = true;
};

namespace detail {

inline std::string need_input(const CliOptions& o)
{
    if (o.inputs.empty())
        throw Error(ErrorKind::Parse, "command '" + o.command + "' needs an input file");
    return o.inputs[0];
}

inline SigmaModule need_module(const ModuleInput& in)
{
    if (!in.module)
        throw Error(ErrorKind::Parse, "input has no module (keys C and D)");
    return *in.module;
}

inline void describe_input(Report& r, const ModuleInput& in, const std::string& path)
{
    r.set("input", path);
    r.set("base", to_json(in.base));
    r.line("input: " + path);
    r.line("base: " + in.base.describe());
    r.line("working precision: " + std::to_string(in.base.prec));
    if (in.module) {
        r.set("C", to_json(in.module->C));
        r.set("D", to_json(in.module->D));
        r.line("rank: " + std::to_string(in.module->rank()));
    }
}

inline ExtensionTower pick_tower(const CliOptions& o, const ModuleInput& in, const EquationSystem& sys)
{
    if (o.tower_file) {
        Json t = read_json_file(*o.tower_file);
        return tower_from_json(t.is_object() ? t.at("tower") : t, in.base.p);
    }
    if (in.tower)
        return *in.tower;
    return suggest_tower(in.base, static_cast<int>(sys.h * sys.N));
}

inline Json points_json(const PointSet& ps)
{
    Json arr = Json::array();
    for (const auto& pt : ps.points) {
        Json c = Json::array();
        for (const auto& s : pt.coords)
            c.push_back(s.to_string("w"));
        arr.push_back(c);
    }
    return arr;
}

inline std::size_t nilpotency_order(const SigmaModule& M)
{
    SeriesMatrix P = M.base.identity(M.rank());
    for (std::size_t N = 1; N <= M.rank() + 1; ++N) {
        P = P * M.D;
        if (P.is_zero())
            return N;
    }
    return M.rank() + 1;
}

inline Json sh_json(const SHObject& o)
{
    return Json{{"flavor", to_string(o.flavor)},
                {"ambient_low_exponent", o.low},
                {"ambient_dim", o.ambient_dim()},
                {"Mbar_dim", o.Mbar.rows()},
                {"M1_dim", o.M1.rows()},
                {"phi0", to_json(o.phi0)},
                {"M1", to_json(o.M1)},
                {"phi1", to_json(o.phi1)},
                {"spans", o.spans},
                {"kernel_is_layer0", o.kernel_is_layer0},
                {"well_defined", o.well_defined}};
}

inline Rational parse_rational(const std::string& s)
{
    try {
        auto slash = s.find('/');
        std::size_t used = 0;
        long long a = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash))
            throw std::invalid_argument(s);
        long long b = 1;
        if (slash != std::string::npos) {
            b = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1 || b == 0)
                throw std::invalid_argument(s);
        }
        return Rational(a, b);
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, "not a rational number: '" + s + "'");
    }
}

inline void cmd_validate(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    r.set("certificate", certificate_json(M));
    if (M.cert.has_B)
        r.line("B = " + M.cert.B.to_string());
    for (const auto& f : M.cert.failures)
        r.line("  failure: " + f);
    r.check("integral", M.cert.integral);
    r.check("det C != 0", M.cert.det_nonzero.ok);
    r.check("D nilpotent", M.cert.nilpotent.ok);
    r.check("sigma(D) C = C D", M.cert.semilinear.ok);
    r.check("B integral (strict)", M.cert.strict.ok);
    r.check("sigma(D) - pi0 E = C B", M.cert.remark_b.ok);
}

inline void cmd_roundtrip(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    M.require_valid("roundtrip");
    auto rt = functor_L_roundtrip(M, o.cap);
    auto H = build_residue_algebra(M, o.cap);
    auto ax = check_hopf_axioms(H);
    r.set("algebra_dim", H.dim());
    r.set("kernel_dim", rt.kernel_dim);
    r.set("eigen_dim", rt.eigen_dim);
    r.set("W", to_json(rt.W));
    r.set("recovered_C", to_json(rt.recovered_C));
    r.set("recovered_D", to_json(rt.recovered_D));
    r.set("multiplicativity_on_all_pairs", ax.full_pairs);
    r.line("residue algebra dimension " + std::to_string(H.dim()) + ", primitive kernel " + std::to_string(rt.kernel_dim) +
           ", eigen part " + std::to_string(rt.eigen_dim));
    for (const auto& n : rt.notes)
        r.line("  note: " + n);
    r.check("kernel dimension = n N0", rt.kernel_dim == M.rank() * static_cast<std::size_t>(M.base.n0));
    r.check("recovered C matches", rt.matches_C);
    r.check("recovered D matches", rt.matches_D);
    r.check("[pi0] respects relations", rt.pi0_respects_relations);
    r.check("coassociative", ax.coassociative);
    r.check("counit", ax.counit);
    r.check("Delta multiplicative", ax.delta_multiplicative);
}

inline PointSet solve_for(Report& r, const CliOptions& o, const ModuleInput& in, const EquationSystem& sys)
{
    auto tower = pick_tower(o, in, sys);
    r.set("tower", tower.describe());
    r.line("tower: " + tower.describe() + " (points in k'((w)), w^E = pi)");
    r.set("N", sys.N);
    r.set("h", sys.h);
    return solve_points(sys, tower);
}

inline void cmd_points(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    auto sys = build_equations(M);
    auto ps = solve_for(r, o, in, sys);
    r.set("expected", ps.expected);
    r.set("digits", ps.digits);
    r.set("points", points_json(ps));
    r.line(std::to_string(ps.points.size()) + " points (expected " + std::to_string(ps.expected) + "), separated below w^" +
           std::to_string(ps.digits));
    for (const auto& pt : ps.points) {
        std::string s;
        for (const auto& c : pt.coords)
            s += (s.empty() ? "" : ", ") + c.to_string("w");
        r.line("  (" + s + ")");
    }
    bool all = true;
    for (const auto& pt : ps.points)
        all = all && verify_point(sys, ps.field, pt);
    r.check("point count = q^(hN)", ps.points.size() == ps.expected);
    r.check("every point satisfies the equations", all);
    r.check("closed under F_q scaling", fq_closed(ps));
    r.check("permuted by the tower automorphism", galois_permutes(ps));
}

inline void cmd_character(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    auto tc = tame_character(M);
    Json d = Json::array();
    std::string ds;
    for (int x : tc.digits) {
        d.push_back(x);
        ds += (ds.empty() ? "" : ",") + std::to_string(x);
    }
    r.set("N", tc.N);
    r.set("a", tc.a);
    r.set("a_mod", tc.a_mod);
    r.set("digits", d);
    r.set("trivial", tc.trivial);
    r.line("character chi_" + std::to_string(tc.N) + "^a with a = " + std::to_string(tc.a) + " (digits " + ds + ")" +
           (tc.trivial ? ", etale: trivial" : ""));
    r.check("digits in [0, e]", tc.digits_in_range);
    r.check("agrees with strictness", tc.agrees_with_strictness);
}

inline void cmd_gap(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    auto sys = build_equations(M);
    auto ps = solve_for(r, o, in, sys);
    Rational bound(in.base.e(), static_cast<long long>(in.base.q) - 1);
    r.set("points", ps.points.size());
    r.set("bound", to_json(bound));
    if (ps.points.size() < 2) {
        r.set("gap", nullptr);
        r.line("fewer than two points: nothing to separate");
        return;
    }
    Rational g = min_pairwise_gap(ps);
    r.set("gap", to_json(g));
    r.line("minimal pairwise gap " + to_string(g) + " (bound e/(q-1) = " + to_string(bound) + ")");
    r.check("gap <= e/(q-1)", g <= bound);
}

inline void cmd_ramify(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    Json j = read_json_file(path);
    if (!j.contains("p"))
        throw Error(ErrorKind::Parse, path + ": missing key p");
    int p = j.at("p").get<int>();
    Json tj;
    if (o.tower_file) {
        Json t = read_json_file(*o.tower_file);
        tj = t.is_object() ? t.at("tower") : t;
    } else if (j.contains("tower")) {
        tj = j.at("tower");
    } else {
        throw Error(ErrorKind::Parse, path + ": no tower (key tower or --tower)");
    }
    auto t = tower_from_json(tj, p);
    auto phi = t.herbrand();
    Json lower = Json::array(), upper = Json::array();
    for (const auto& b : phi.breaks()) {
        lower.push_back(to_json(b));
        upper.push_back(to_json(phi(b)));
    }
    r.set("input", path);
    r.set("tower", t.describe());
    r.set("e", t.ramification_index());
    r.set("f", t.residue_degree());
    r.set("herbrand", to_json(phi));
    r.set("lower_breaks", lower);
    r.set("upper_breaks", upper);
    r.set("max_upper_break", to_json(max_break(phi)));
    r.line("tower: " + t.describe() + ", e = " + std::to_string(t.ramification_index()) + ", f = " + std::to_string(t.residue_degree()));
    r.line("phi: " + phi.to_string());
    r.check("phi is concave", phi.is_concave());
}

inline void cmd_bound(Report& r, const CliOptions& o)
{
    long long e = 0, N = 0, q = 0;
    std::optional<Rational> measured;
    if (o.break_value)
        measured = parse_rational(*o.break_value);
    for (const auto& a : o.inputs) {
        auto eq = a.find('=');
        if (eq == std::string::npos) {
            Json j = read_json_file(a);
            e = j.value("e", e);
            N = j.value("N", N);
            q = j.value("q", q);
            if (j.contains("break") && !measured)
                measured = parse_rational(j["break"].is_string() ? j["break"].get<std::string>() : std::to_string(j["break"].get<long long>()));
            continue;
        }
        std::string key = a.substr(0, eq);
        Rational v = parse_rational(a.substr(eq + 1));
        if (v.denominator() != 1 && key != "break")
            throw Error(ErrorKind::Parse, key + " must be an integer");
        if (key == "e")
            e = v.numerator();
        else if (key == "N")
            N = v.numerator();
        else if (key == "q")
            q = v.numerator();
        else if (key == "break")
            measured = v;
        else
            throw Error(ErrorKind::Parse, "unknown parameter '" + key + "'");
    }
    if (e < 1 || N < 1 || q < 2)
        throw Error(ErrorKind::Parse, "bound needs e=<int> N=<int> q=<int>");
    auto res = theorem5_check(e, N, q, measured.value_or(Rational(0)));
    r.set("e", e);
    r.set("N", N);
    r.set("q", q);
    r.set("bound", to_json(res.bound));
    r.line("bound e(N + 1/(q-1)) - 1 = " + to_string(res.bound));
    if (measured) {
        r.set("break", to_json(*measured));
        r.check("break " + to_string(*measured) + " <= bound", res.pass);
    }
}

inline Json tower_json(const DivisibleTower& T)
{
    Json ranks = Json::array();
    for (const auto& L : T.levels)
        ranks.push_back(L.rank());
    return ranks;
}

inline void report_divisible(Report& r, const DivisibleReport& rep)
{
    Json f = Json::array(), w = Json::array();
    for (const auto& s : rep.failures) {
        f.push_back(s);
        r.line("  failure: " + s);
    }
    for (const auto& s : rep.warnings) {
        w.push_back(s);
        r.line("  warning: " + s);
    }
    r.set("identities_checked", rep.checks);
    r.set("failures", f);
    r.set("warnings", w);
}

inline void cmd_divisible(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    M.require_valid("divisible");
    std::size_t L = in.raw.value("levels", 3);
    if (L < 1 || L > 8)
        throw Error(ErrorKind::Capacity, "levels must be in 1..8");
    DivisibleTower T;
    ModuleHom surj;
    std::size_t N = nilpotency_order(M);
    if (M.D.is_zero()) {
        auto t = build_tower_N1(M, L);
        T = t.tower;
        surj = t.surjection;
        r.line("construction: [pi0] M = 0, levels from C~ = pi0 C^-1");
    } else {
        T = build_tower(M, std::max(L, N));
        surj = tower_surjection(M, T, N);
        r.line("construction: u-adic tower, surjection from level " + std::to_string(N));
    }
    r.set("level_ranks", tower_json(T));
    r.set("surjection", to_json(surj.U));
    auto rep = verify_divisible(T);
    report_divisible(r, rep);
    bool levels_ok = true;
    for (const auto& l : T.levels)
        levels_ok = levels_ok && l.valid();
    r.check("every level passes the matrix criteria", levels_ok);
    r.check("tower identities", rep.ok);
    r.check("surjection is a hom", hom_check(surj).ok());
    r.check("surjection is onto", is_surjection_matrix(surj.U));
}

inline void cmd_embed(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    M.require_valid("embed");
    std::size_t N = in.raw.value("N", nilpotency_order(M));
    auto emb = embed_into_divisible(M, N);
    r.set("N", N);
    r.set("level_ranks", tower_json(emb.tower));
    r.set("embedding", to_json(emb.embedding.U));
    r.line("pure embedding into level " + std::to_string(N) + " (rank " + std::to_string(emb.embedding.target.rank()) + ")");
    report_divisible(r, emb.tower_report);
    r.check("embedding is a hom", emb.embedding_hom);
    r.check("embedding is pure", emb.embedding_pure);
    r.check("cover maps onto M", emb.surjection_hom && emb.surjection_onto);
    r.check("tower identities", emb.tower_report.ok);
    if (N > 1) {
        Json tr{{"computed", emb.trace.computed}};
        if (emb.trace.computed) {
            tr["M1_rank"] = emb.trace.M1.rank();
            tr["M2_rank"] = emb.trace.M2.rank();
            tr["beta_pure"] = emb.trace.beta_pure;
            tr["difference_rank"] = emb.trace.difference.middle.rank();
            tr["difference_killed"] = emb.trace.difference_killed;
        }
        Json notes = Json::array();
        for (const auto& n : emb.trace.notes) {
            notes.push_back(n);
            r.line("  induction: " + n);
        }
        tr["notes"] = notes;
        r.set("induction", tr);
        if (emb.trace.computed)
            r.check("[pi0^(N-1)] kills the Baer difference", emb.trace.difference_killed);
    }
}

inline void cmd_sh(Report& r, const CliOptions& o)
{
    auto path = need_input(o);
    auto in = load_module_input(path, o.prec);
    auto M = need_module(in);
    describe_input(r, in, path);
    Json flavors = Json::array();
    auto add = [&](const SHObject& s) {
        flavors.push_back(sh_json(s));
        std::string name = to_string(s.flavor);
        r.line(name + ": ambient dim " + std::to_string(s.ambient_dim()) + ", Mbar dim " + std::to_string(s.Mbar.rows()) + ", M1 dim " +
               std::to_string(s.M1.rows()) + (s.well_defined ? "" : " (phi0 depends on lifts)"));
        r.check(name + " spanning axiom", s.axiom());
    };
    int e = in.base.e();
    if (e == 1)
        add(sh_e1(M));
    if (static_cast<std::uint64_t>(e) <= in.base.q - 1)
        add(sh_general(M));
    add(sh_prime(M));
    r.set("flavors", flavors);
    if (e == 1)
        r.check("sh_e1 and sh_general agree", sh_e1_general_agree(M));
}

} // namespace detail

/// Runs one command; exit 0 when every check passes, 1 on a failed check or a
/// computation error, 2 on usage or parse errors.
inline CliResult run_cli(const CliOptions& o)
{
    Report r(o.command);
    CliResult res;
    try {
        if (o.command == "validate")
            detail::cmd_validate(r, o);
        else if (o.command == "roundtrip")
            detail::cmd_roundtrip(r, o);
        else if (o.command == "points")
            detail::cmd_points(r, o);
        else if (o.command == "character")
            detail::cmd_character(r, o);
        else if (o.command == "gap")
            detail::cmd_gap(r, o);
        else if (o.command == "ramify")
            detail::cmd_ramify(r, o);
        else if (o.command == "bound")
            detail::cmd_bound(r, o);
        else if (o.command == "divisible")
            detail::cmd_divisible(r, o);
        else if (o.command == "embed")
            detail::cmd_embed(r, o);
        else if (o.command == "sh")
            detail::cmd_sh(r, o);
        else
            throw Error(ErrorKind::Parse, "unknown command '" + o.command + "'");
    } catch (const Error& e) {
        r.set("error", Json{{"kind", to_string(e.kind())}, {"message", e.what()}});
        r.line("error (" + std::string(to_string(e.kind())) + "): " + e.what());
        if (e.kind() == ErrorKind::Parse) {
            res.exit_code = 2;
            res.text = "strictmod: " + std::string(e.what()) + "\n";
            return res;
        }
        r.check("computation completed", false);
    } catch (const nlohmann::json::exception& e) {
        res.exit_code = 2;
        res.text = std::string("strictmod: malformed input: ") + e.what() + "\n";
        return res;
    }
    res.text = r.render();
    res.exit_code = r.pass() ? 0 : 1;
    return res;
}

} // namespace strictmod
