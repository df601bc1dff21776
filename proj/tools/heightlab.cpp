// Command-line front end: single computations, prime scans and the survey.

#include <chrono>
#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "heightlab/elliptic.hpp"
#include "heightlab/equidist.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/expr.hpp"
#include "heightlab/kummer.hpp"
#include "heightlab/ntheight.hpp"
#include "heightlab/report.hpp"
#include "heightlab/survey.hpp"

using namespace heightlab;

namespace {

enum Exit { kOk = 0, kValidation = 2, kPrecision = 3, kInternal = 4 };

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::pair<Integer, Integer> parse_pair_int(const std::string& text, const char* what)
{
    auto comma = text.find(',');
    Integer a, b;
    if (comma == std::string::npos || a.set_str(text.substr(0, comma), 10) != 0 || b.set_str(text.substr(comma + 1), 10) != 0)
        throw ValidationError(std::string(what) + " must be two integers 'A,B', got '" + text + "'");
    return {a, b};
}

std::pair<Rational, Rational> parse_pair_rat(const std::string& text, const char* what)
{
    auto comma = text.find(',');
    Rational a, b;
    if (comma == std::string::npos || a.set_str(text.substr(0, comma), 10) != 0 || b.set_str(text.substr(comma + 1), 10) != 0 ||
        a.get_den() == 0 || b.get_den() == 0)
        throw ValidationError(std::string(what) + " must be two rationals 'x,y', got '" + text + "'");
    a.canonicalize();
    b.canonicalize();
    return {a, b};
}

Rational parse_rat(const std::string& text, const char* what)
{
    Rational q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) throw ValidationError(std::string(what) + " must be a rational, got '" + text + "'");
    q.canonicalize();
    return q;
}

struct Output {
    bool json = false;
    void emit(const Json& record, const std::string& human) const
    {
        if (json) std::cout << record.dump(2) << "\n";
        else std::cout << human;
    }
};

Json breakdown_json(const HeightBreakdown& bd)
{
    Json arr = Json::array();
    for (const auto& e : bd.entries) {
        Json j{{"place", e.place == kArchimedean ? Json("inf") : Json(e.place)},
               {"value", num12(e.value)},
               {"method", to_string(e.method)},
               {"error", num12(e.error)}};
        j["log_coefficient"] = e.coefficient ? Json(e.coefficient->get_str()) : Json(nullptr);
        if (e.closed_form_agrees) j["closed_form_agrees"] = *e.closed_form_agrees;
        arr.push_back(j);
    }
    return arr;
}

int cmd_height(const Output& out, const std::string& text)
{
    auto t0 = Clock::now();
    ExprHeight h = expr_height(parse_height_expr(text));
    Json results{{"height", num12(h.exact.value())}, {"symbolic", h.exact.to_string()}, {"method", "exact"}};
    Json bounds{{"height", 0}};
    std::string human = "h(" + text + ") = " + fmt12(h.exact.value()) + "   [" + h.exact.to_string() + ", exact]\n";
    if (h.numeric) {
        results["numeric"] = num12(h.numeric->value);
        bounds["numeric"] = num12(h.numeric->error);
        human += "  numeric check from the minimal polynomial: " + fmt12(h.numeric->value) + " +- " + fmt12(h.numeric->error) + "\n";
    }
    out.emit(make_record("height", {{"expr", text}}, results, bounds, elapsed_ms(t0)), human);
    return kOk;
}

int cmd_nt_height(const Output& out, const std::string& curve, const std::string& point, bool both, int depth)
{
    auto t0 = Clock::now();
    auto [A, B] = parse_pair_int(curve, "--curve");
    auto [x, y] = parse_pair_rat(point, "--point");
    EllipticCurve E(A, B);
    EcPoint P = EcPoint::affine(x, y);
    check_on_curve(E, P);
    NtHeight ls = nt_height(E, P, HeightMode::local_sum, depth);
    Json inputs{{"curve", {A.get_str(), B.get_str()}}, {"point", {x.get_str(), y.get_str()}}, {"depth", depth}, {"both", both}};
    Json results{{"nt_height", num12(ls.value)}};
    Json bounds{{"local_sum", num12(ls.error)}};
    std::string human = "E: " + E.to_string() + "   P = " + P.to_string() + "\n";
    if (ls.torsion_order) {
        results["torsion_order"] = *ls.torsion_order;
        human += "P is torsion of order " + std::to_string(*ls.torsion_order) + "; nt_height = 0\n";
    } else {
        results["breakdown"] = breakdown_json(*ls.breakdown);
        char line[200];
        human += "  place   lambda_v           method        log-coefficient\n";
        for (const auto& e : ls.breakdown->entries) {
            std::snprintf(line, sizeof line, "  %-6s  %-17s  %-12s  %s\n",
                          e.place == kArchimedean ? "inf" : std::to_string(e.place).c_str(), fmt12(e.value).c_str(),
                          to_string(e.method), e.coefficient ? e.coefficient->get_str().c_str() : "-");
            human += line;
        }
        human += "  total (local_sum) = " + fmt12(ls.value) + "  +- " + fmt12(ls.error) + "\n";
        if (both) {
            NtHeight lim = nt_height(E, P, HeightMode::limit, depth > kMaxLimitDepth ? 0 : depth);
            results["limit"] = num12(lim.value);
            results["difference"] = num12(std::fabs(ls.value - lim.value));
            bounds["limit"] = num12(lim.error);
            human += "  limit             = " + fmt12(lim.value) + "  +- " + fmt12(lim.error) + "\n";
            human += "  |difference|      = " + fmt12(std::fabs(ls.value - lim.value)) + "\n";
        }
    }
    out.emit(make_record("nt-height", inputs, results, bounds, elapsed_ms(t0)), human);
    return kOk;
}

int cmd_supersingular(const Output& out, const std::string& curve, long pmax, bool csv)
{
    auto t0 = Clock::now();
    auto [A, B] = parse_pair_int(curve, "--curve");
    if (pmax < 0 || pmax > 1000000) throw ValidationError("--pmax must lie in [0, 10^6]");
    EllipticCurve E(A, B);
    Json rows = Json::array();
    std::string human = csv ? "p,a_p,supersingular\n" : "E: " + E.to_string() + "\n  p       a_p   supersingular\n";
    for (long p = 5; p <= pmax; ++p) {
        if (!is_prime(p) || mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(p))) continue;
        long ap = ap_count(E, p);
        rows.push_back({{"p", p}, {"a_p", ap}, {"supersingular", ap == 0}});
        char line[100];
        if (csv) std::snprintf(line, sizeof line, "%ld,%ld,%s\n", p, ap, ap == 0 ? "true" : "false");
        else std::snprintf(line, sizeof line, "  %-6ld  %4ld  %s\n", p, ap, ap == 0 ? "yes" : "no");
        human += line;
    }
    out.emit(make_record("supersingular", {{"curve", {A.get_str(), B.get_str()}}, {"pmax", pmax}}, {{"rows", rows}}, Json::object(),
                         elapsed_ms(t0)),
             human);
    return kOk;
}

int cmd_tower(const Output& out, long p, int r, int s, const std::string& a_text)
{
    auto t0 = Clock::now();
    Rational a = parse_rat(a_text, "--a");
    TowerLevel lvl = TowerLevel::make(p, r, s, a);
    Json results{{"lambda", lvl.lambda}, {"v_b", lvl.v_b}, {"p_divides_v_b", lvl.p_divides_vb}, {"degree", tower_degree(lvl)}};
    std::string human = "K_{" + std::to_string(r) + "," + std::to_string(s) + "} over Q_" + std::to_string(p) + ", a = " + a.get_str() +
                        "\n  lambda = " + std::to_string(lvl.lambda) + ", v_p(b) = " + std::to_string(lvl.v_b) +
                        "\n  degree = " + std::to_string(tower_degree(lvl)) + "\n";
    if (!((r == 0 && s == 0) || (r == 1 && s == 0))) {
        auto sub = subfield_rule(lvl);
        SigmaAction act = sigma_action(lvl);
        Json chain = Json::array();
        std::string chain_text;
        std::pair<int, int> cur{r, s};
        while (true) {
            chain.push_back({cur.first, cur.second});
            chain_text += "(" + std::to_string(cur.first) + "," + std::to_string(cur.second) + ")";
            if ((cur.first == 1 && cur.second == 0) || (cur.first == 0 && cur.second == 0)) break;
            chain_text += " -> ";
            cur = subfield_rule(lvl.at(cur.first, cur.second));
        }
        results["fixed_field"] = {sub.first, sub.second};
        results["chain"] = chain;
        results["sigma"] = act.to_string();
        human += "  fixed field of G = K_{" + std::to_string(sub.first) + "," + std::to_string(sub.second) + "}\n  sigma: " +
                 act.to_string() + "\n  chain: " + chain_text + "\n";
    }
    if (a.get_den() == 1) {
        results["amoroso_condition"] = amoroso_condition(a, p);
        human += std::string("  p does not divide a and p^2 does not divide a^{p-1} - 1: ") + (amoroso_condition(a, p) ? "yes" : "no") + "\n";
    }
    out.emit(make_record("tower", {{"p", p}, {"r", r}, {"s", s}, {"a", a.get_str()}}, results, Json::object(), elapsed_ms(t0)), human);
    return kOk;
}

int cmd_equidist_gauss(const Output& out, const std::string& a_text, long p, long n)
{
    auto t0 = Clock::now();
    Rational a = parse_rat(a_text, "--a");
    Json rows = Json::array();
    std::string human = "min(|b|, 1/|b|) over the orbit of b = a^{1/p^n}, a = " + a.get_str() + ", p = " + std::to_string(p) + "\n";
    for (long k = 0; k <= n; ++k) {
        GaussStatistic g = gauss_statistic(a, p, k);
        rows.push_back({{"n", k}, {"value", num12(g.stat.value)}, {"exponent", g.exponent.get_str()}, {"limit", 1}});
        human += "  n = " + std::to_string(k) + ": " + fmt12(g.stat.value) + "  (= p^-" + g.exponent.get_str() + ")\n";
    }
    out.emit(make_record("equidist gauss", {{"a", a.get_str()}, {"p", p}, {"n", n}}, {{"rows", rows}}, Json::object(), elapsed_ms(t0)), human);
    return kOk;
}

int cmd_equidist_suz(const Output& out, const std::string& curve, const std::vector<long>& orders, double cap, int depth)
{
    auto t0 = Clock::now();
    auto [A, B] = parse_pair_int(curve, "--curve");
    EllipticCurve E(A, B);
    Json rows = Json::array();
    Json bounds = Json::object();
    std::string human = "mean of min(m, lambda_inf) over E[N] \\ O on " + E.to_string() + ", m = " + fmt12(cap) + "\n";
    for (long N : orders) {
        OrbitStatistic s = suz_torsion_average(E, N, cap, depth);
        rows.push_back({{"N", N}, {"samples", s.sample_count}, {"value", num12(s.value)}, {"limit", 0}});
        bounds[std::to_string(N)] = num12(s.error);
        human += "  N = " + std::to_string(N) + " (" + std::to_string(s.sample_count) + " points): " + fmt12(s.value) + " +- " +
                 fmt12(s.error) + "\n";
    }
    out.emit(make_record("equidist suz", {{"curve", {A.get_str(), B.get_str()}}, {"orders", orders}, {"cap", num12(cap)}, {"depth", depth}},
                         {{"rows", rows}}, bounds, elapsed_ms(t0)),
             human);
    return kOk;
}

int cmd_equidist_bernoulli(const Output& out, long N, const std::vector<std::string>& values)
{
    auto t0 = Clock::now();
    std::vector<Rational> xs;
    Json inputs;
    if (!values.empty()) {
        for (const auto& v : values) xs.push_back(parse_rat(v, "value"));
        inputs["values"] = values;
    } else {
        if (N < 1) throw ValidationError("--N must be >= 1");
        xs = uniform_grid(N);
        inputs["N"] = N;
    }
    Rational v = bernoulli_uniformity(xs);
    std::string human = "mean of b2(x) = x^2 - x + 1/6: " + v.get_str() + " = " + fmt12(v.get_d()) + "\n";
    out.emit(make_record("equidist bernoulli", inputs, {{"exact", v.get_str()}, {"value", num12(v.get_d())}}, {{"value", 0}}, elapsed_ms(t0)),
             human);
    return kOk;
}

int cmd_survey(const Output& out, const std::string& config, const std::string& dir)
{
    auto t0 = Clock::now();
    SurveyConfig cfg = config.empty() ? SurveyConfig{} : load_survey_config(config);
    SurveyResult res = run_survey(cfg);
    write_survey(res, dir);
    double ms = elapsed_ms(t0);
    Json summary{{"out_dir", dir},
                 {"misclassified", res.misclassified},
                 {"failed_checks", res.failed_checks},
                 {"seed", cfg.seed}};
    out.emit(make_record("survey", {{"config", config}}, summary, Json::object(), ms),
             res.text + "\nreport written to " + dir + "/survey_report.json (" + fmt12(ms) + " ms)\n");
    return res.misclassified == 0 && res.failed_checks == 0 ? kOk : kInternal;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"heightlab: heights of small points"};
    app.require_subcommand(1);
    Output out;
    app.add_flag("--json", out.json, "Print the JSON record instead of text");

    std::string expr;
    auto* height = app.add_subcommand("height", "Weil height of a product of rationals, zeta(n) and root(a, n)");
    height->add_option("expr", expr, kExprGrammar)->required();

    std::string curve, point;
    bool both = false;
    int depth = 0;
    auto* nt = app.add_subcommand("nt-height", "Neron-Tate height with its local breakdown");
    nt->add_option("--curve", curve, "A,B for y^2 = x^3 + Ax + B")->required();
    nt->add_option("--point", point, "x,y (rationals)")->required();
    nt->add_flag("--both", both, "Also run the limit method");
    nt->add_option("--depth", depth, "Doubling depth (0 = defaults)");

    long pmax = 0;
    bool csv = false;
    auto* ss = app.add_subcommand("supersingular", "Table of a_p for good primes 5 <= p <= pmax");
    ss->add_option("--curve", curve, "A,B")->required();
    ss->add_option("--pmax", pmax, "Largest prime")->required();
    ss->add_flag("--csv", csv, "CSV output");

    long p = 3;
    int r = 1, s = 0;
    std::string a_text = "2";
    auto* tower = app.add_subcommand("tower", "Degree, fixed field and generator for K_{r,s}");
    tower->add_option("--p", p, "Odd prime")->required();
    tower->add_option("--r", r, "Cyclotomic level")->required();
    tower->add_option("--s", s, "Kummer level")->required();
    tower->add_option("--a", a_text, "Base a (default 2)");

    auto* eq = app.add_subcommand("equidist", "Equidistribution statistics");
    eq->require_subcommand(1);
    long n = 6;
    auto* gauss = eq->add_subcommand("gauss", "Orbit statistic of a^{1/p^n}");
    gauss->add_option("--a", a_text, "Rational a (default 2)");
    gauss->add_option("--p", p, "Odd prime (default 3)");
    gauss->add_option("--n", n, "Largest level (default 6)");
    std::vector<long> orders{3, 5, 7, 9, 11, 13};
    double cap = 5.0;
    int suz_depth = kDefaultSeriesDepth;
    std::string suz_curve = "0,-2";
    auto* suz = eq->add_subcommand("suz", "Truncated local heights averaged over N-torsion");
    suz->add_option("--curve", suz_curve, "A,B (default 0,-2)");
    suz->add_option("--N", orders, "Odd torsion orders in [3, 13]");
    suz->add_option("--cap", cap, "Truncation m (default 5)");
    suz->add_option("--depth", suz_depth, "Series depth (default 12)");
    long grid = 1000;
    std::vector<std::string> values;
    auto* bern = eq->add_subcommand("bernoulli", "Mean of b2 over j/N or given values");
    bern->add_option("--N", grid, "Uniform grid size (default 1000)");
    bern->add_option("--values", values, "Explicit rationals in [0, 1)");

    std::string config, dir = "survey_out";
    auto* survey = app.add_subcommand("survey", "Survey over truncated saturated towers");
    survey->add_option("--config", config, "key = value or JSON config (defaults when omitted)");
    survey->add_option("--out", dir, "Output directory (default survey_out)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*height) return cmd_height(out, expr);
        if (*nt) return cmd_nt_height(out, curve, point, both, depth);
        if (*ss) return cmd_supersingular(out, curve, pmax, csv);
        if (*tower) return cmd_tower(out, p, r, s, a_text);
        if (*gauss) return cmd_equidist_gauss(out, a_text, p, n);
        if (*suz) return cmd_equidist_suz(out, suz_curve, orders, cap, suz_depth);
        if (*bern) return cmd_equidist_bernoulli(out, grid, values);
        if (*survey) return cmd_survey(out, config, dir);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const TorsionOrbitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const PrecisionError& e) {
        std::cerr << "precision: " << e.what() << "\n";
        return kPrecision;
    } catch (const AmbiguityError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kPrecision;
    } catch (const NoRootError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kInternal;
}
