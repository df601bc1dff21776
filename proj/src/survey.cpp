#include "heightlab/survey.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "heightlab/elliptic.hpp"
#include "heightlab/equidist.hpp"
#include "heightlab/errors.hpp"
#include "heightlab/gmheights.hpp"
#include "heightlab/kummer.hpp"
#include "heightlab/ntheight.hpp"

namespace heightlab {

namespace {

[[noreturn]] void bad_field(const std::string& field, const std::string& why)
{
    throw ValidationError("config field '" + field + "': " + why);
}

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

Rational field_rational(const std::string& field, const std::string& v)
{
    Rational q;
    if (v.empty() || q.set_str(v, 10) != 0 || q.get_den() == 0) bad_field(field, "'" + v + "' is not a rational number");
    q.canonicalize();
    return q;
}

long field_long(const std::string& field, const std::string& v)
{
    try {
        std::size_t used = 0;
        long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        bad_field(field, "'" + v + "' is not an integer");
    }
}

double field_double(const std::string& field, const std::string& v)
{
    try {
        std::size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::logic_error&) {
        bad_field(field, "'" + v + "' is not a number");
    }
}

std::vector<long> field_list(const std::string& field, const std::string& v)
{
    std::vector<long> out;
    if (trim(v).empty()) return out;
    for (const auto& item : split(v, ',')) out.push_back(field_long(field, item));
    return out;
}

std::vector<std::pair<Integer, Integer>> field_curves(const std::string& v)
{
    std::vector<std::pair<Integer, Integer>> out;
    if (trim(v).empty()) return out;
    for (const auto& item : split(v, ';')) {
        if (item.empty()) continue;
        auto ab = split(item, ',');
        if (ab.size() != 2) bad_field("curves", "'" + item + "' must be A,B");
        Integer A, B;
        if (A.set_str(ab[0], 10) != 0 || B.set_str(ab[1], 10) != 0) bad_field("curves", "'" + item + "' must hold integers");
        out.emplace_back(A, B);
    }
    return out;
}

void apply_field(SurveyConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "a") cfg.a = field_rational(key, value);
    else if (key == "p") cfg.p = field_long(key, value);
    else if (key == "max_r") cfg.max_r = static_cast<int>(field_long(key, value));
    else if (key == "max_s") cfg.max_s = static_cast<int>(field_long(key, value));
    else if (key == "m_bound") cfg.m_bound = field_long(key, value);
    else if (key == "u_bound") cfg.u_bound = field_long(key, value);
    else if (key == "membership_bound") cfg.membership_bound = field_long(key, value);
    else if (key == "nonmember_samples") cfg.nonmember_samples = field_long(key, value);
    else if (key == "metric_samples") cfg.metric_samples = field_long(key, value);
    else if (key == "curves") cfg.curves = field_curves(value);
    else if (key == "torsion_scan_bound") cfg.torsion_scan_bound = field_long(key, value);
    else if (key == "height_points") cfg.height_points = field_long(key, value);
    else if (key == "series_depth") cfg.series_depth = static_cast<int>(field_long(key, value));
    else if (key == "limit_depth") cfg.limit_depth = static_cast<int>(field_long(key, value));
    else if (key == "pmax") cfg.pmax = field_long(key, value);
    else if (key == "suz_orders") cfg.suz_orders = field_list(key, value);
    else if (key == "suz_cap") cfg.suz_cap = field_double(key, value);
    else if (key == "gauss_max_level") cfg.gauss_max_level = field_long(key, value);
    else if (key == "bernoulli_grid") cfg.bernoulli_grid = field_list(key, value);
    else if (key == "seed") {
        try {
            cfg.seed = std::stoull(value);
        } catch (const std::logic_error&) {
            bad_field(key, "'" + value + "' is not an unsigned 64-bit integer");
        }
    } else if (key == "parallelogram_tol") cfg.parallelogram_tol = field_double(key, value);
    else if (key == "agreement_tol") cfg.agreement_tol = field_double(key, value);
    else bad_field(key, "unknown key");
}

std::string json_scalar_text(const std::string& key, const Json& v)
{
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned() || v.is_number_float()) return v.dump();
    if (v.is_array()) {
        std::string out;
        for (const auto& item : v) {
            if (key == "curves") {
                if (item.is_array() && item.size() == 2) out += item[0].dump() + "," + item[1].dump() + ";";
                else if (item.is_string()) out += item.get<std::string>() + ";";
                else bad_field(key, "each curve must be [A, B] or \"A,B\"");
            } else {
                if (!item.is_number_integer()) bad_field(key, "list entries must be integers");
                out += item.dump() + ",";
            }
        }
        if (!out.empty()) out.pop_back();
        return out;
    }
    bad_field(key, "unsupported JSON value");
}

// Uniform integer in [lo, hi] from the raw engine output, so the stream does
// not depend on the standard library's distribution algorithms.
long pick(std::mt19937_64& rng, long lo, long hi)
{
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(rng() % span);
}

long lpow(long p, int e) { return ipow(Integer(p), static_cast<unsigned long>(e)).get_si(); }

std::string level_text(int r, int s) { return "(" + std::to_string(r) + "," + std::to_string(s) + ")"; }

Json height_json(const LogMultiple& h)
{
    Json j;
    j["symbolic"] = h.to_string();
    j["value"] = num12(h.value());
    return j;
}

struct MinTracker {
    std::optional<double> best;
    std::string label;
    void offer(double v, const std::string& what)
    {
        if (v <= 1e-12) return;
        if (!best || v < *best) {
            best = v;
            label = what;
        }
    }
    Json json() const
    {
        Json j;
        j["value"] = best ? num12(*best) : Json(nullptr);
        j["element"] = best ? Json(label) : Json(nullptr);
        return j;
    }
};

// ---------------------------------------------------------------------------

struct MemberRecord {
    SatElement element;
    AlgebraicNumber number;
    long expected_n;
};

Json saturation_section(const SurveyConfig& cfg, std::mt19937_64& rng, std::vector<MemberRecord>& members,
                        SurveyResult& res, std::ostringstream& txt)
{
    Json out;
    Json elems = Json::array();
    std::set<std::string> seen;
    MinTracker min_member, min_nonmember;
    long n_member = 0, n_inconclusive = 0, n_unrealizable = 0;
    const LogMultiple ha = rational_height(cfg.a);

    txt << "Saturated group <a>_sat, a = " << cfg.a.get_str() << ", p = " << cfg.p << "\n";
    for (int r = 0; r <= cfg.max_r; ++r) {
        for (int s = 0; s <= cfg.max_s; ++s) {
            const long pr = lpow(cfg.p, r);
            std::vector<long> us{0};
            for (long u = 1; u < pr && static_cast<long>(us.size()) <= cfg.u_bound; ++u)
                if (u % cfg.p != 0) us.push_back(u);
            for (long m = -cfg.m_bound; m <= cfg.m_bound; ++m) {
                for (long u : us) {
                    SatElement e(u, r, m, s, cfg.a, cfg.p);
                    if (!seen.insert(e.to_string()).second) continue;
                    Json j;
                    j["element"] = e.to_string();
                    j["level"] = {r, s};
                    j["canonical"] = {{"u", e.u()}, {"r", e.r()}, {"m", e.m()}, {"s", e.s()}};
                    auto ml = e.minimal_level();
                    j["minimal_level"] = {ml.first, ml.second};
                    j["exact_height"] = height_json(e.exact_height());
                    std::optional<SatRealization> real;
                    try {
                        real = sat_element_realize(e);
                    } catch (const Error& err) {
                        ++n_unrealizable;
                        j["verdict"] = "unrealizable";
                        j["detail"] = err.what();
                        elems.push_back(j);
                        continue;
                    }
                    const long expected_n = e.s() > 0 ? lpow(cfg.p, e.s()) : 1;
                    SatVerdict v = sat_membership(real->number, cfg.a, cfg.membership_bound);
                    j["degree"] = real->number.degree();
                    j["verdict"] = to_string(v.kind);
                    j["certificate"] = to_string(v.certificate);
                    // Member iff alpha^n a^{-m'} is a root of unity with m' / n = m / p^s.
                    bool correct = v.kind == SatVerdict::Kind::member && v.n == expected_n &&
                                   Integer(v.m * lpow(cfg.p, e.s())) == Integer(e.m()) * v.n;
                    // The recorded height must be (|m| / p^s) h(a), compared symbolically.
                    Rational ratio(std::labs(e.m()), lpow(cfg.p, e.s()));
                    ratio.canonicalize();
                    bool height_ok = e.exact_height().coefficient == ratio * ha.coefficient &&
                                     e.exact_height().argument == ha.argument;
                    if (v.kind == SatVerdict::Kind::member) {
                        j["witness"] = {{"n", v.n}, {"m", v.m.get_str()}, {"root_order", v.root_order}};
                        ++n_member;
                    }
                    if (v.kind == SatVerdict::Kind::inconclusive) ++n_inconclusive;
                    HeightValue hv = weil_height(real->number);
                    j["numeric_height"] = {{"value", num12(hv.value)}, {"error", num12(hv.error)}};
                    bool numeric_ok = std::fabs(hv.value - e.exact_height().value()) <= 1e-9 + hv.error;
                    j["correct"] = correct && height_ok && numeric_ok;
                    if (!correct) ++res.misclassified;
                    if (!height_ok || !numeric_ok) ++res.failed_checks;
                    min_member.offer(e.exact_height().value(), e.to_string());
                    members.push_back({e, real->number, expected_n});
                    elems.push_back(j);
                }
            }
        }
    }
    txt << "  constructed elements: " << elems.size() << " (members " << n_member << ", inconclusive " << n_inconclusive
        << ", unrealizable " << n_unrealizable << ", misclassified " << res.misclassified << ")\n";

    // Sampled elements that are provably outside <a>_sat.
    Json non = Json::array();
    long n_non = 0, n_non_inconclusive = 0;
    const Integer aprimes_prod = [&] {
        Integer prod = 1;
        for (const auto& q : prime_divisors(cfg.a.get_num() * cfg.a.get_den())) prod *= q;
        return prod;
    }();
    for (long i = 0; i < cfg.nonmember_samples; ++i) {
        Json j;
        std::optional<AlgebraicNumber> alpha;
        std::string label, reason;
        if (i % 2 == 0) {
            // root(c, k) with a prime of c outside the support of a: valuations rule it out.
            for (int attempt = 0; attempt < 100 && !alpha; ++attempt) {
                Rational c(pick(rng, 2, 60) * (pick(rng, 0, 1) ? 1 : -1), pick(rng, 1, 12));
                c.canonicalize();
                Integer rad = c.get_num() * c.get_den();
                bool outside = false;
                for (const auto& q : prime_divisors(rad))
                    if (!mpz_divisible_p(aprimes_prod.get_mpz_t(), q.get_mpz_t())) outside = true;
                long k = pick(rng, 1, 9);
                if (!outside || !capelli_irreducible(c, k)) continue;
                alpha = k == 1 ? AlgebraicNumber::rational(c) : AlgebraicNumber::radical(c, k);
                label = "root(" + c.get_str() + "," + std::to_string(k) + ")";
                reason = "a prime outside the support of a divides the norm";
            }
        } else {
            // Root of X^2 - tX + N with N = a^e: alpha / conj(alpha) is a root of unity
            // only when t^2 / N lies in {0, 1, 2, 3, 4}.
            for (int attempt = 0; attempt < 100 && !alpha; ++attempt) {
                long e = pick(rng, 1, 3);
                Rational N = rpow(cfg.a, e);
                if (N.get_den() != 1) continue;
                long t = pick(rng, 1, 9);
                Rational t2(t * t);
                bool excluded = false;
                for (int q = 0; q <= 4; ++q)
                    if (t2 == N * q) excluded = true;
                Integer disc = Integer(t * t) - 4 * N.get_num();
                if (excluded || exact_root(Integer(abs(disc)), 2).has_value()) continue;
                IntPolynomial f{N.get_num(), Integer(-t), Integer(1)};
                alpha = AlgebraicNumber(f, 0);
                label = "root of " + f.to_string();
                reason = "alpha / conj(alpha) is not a root of unity";
            }
        }
        if (!alpha) continue;
        SatVerdict v = sat_membership(*alpha, cfg.a, cfg.membership_bound);
        HeightValue hv = weil_height(*alpha);
        j["element"] = label;
        j["degree"] = alpha->degree();
        j["verdict"] = to_string(v.kind);
        j["certificate"] = to_string(v.certificate);
        j["why_outside"] = reason;
        j["height"] = {{"value", num12(hv.value)}, {"error", num12(hv.error)}};
        bool correct = v.kind == SatVerdict::Kind::non_member;
        j["correct"] = correct;
        if (v.kind == SatVerdict::Kind::inconclusive) ++n_non_inconclusive;
        else if (!correct) ++res.misclassified;
        else ++n_non;
        min_nonmember.offer(hv.value, label);
        non.push_back(j);
    }
    txt << "  sampled non-members: " << non.size() << " (certified " << n_non << ", inconclusive " << n_non_inconclusive
        << ")\n";
    txt << "  min nonzero member height:     " << (min_member.best ? fmt12(*min_member.best) : "-") << "  "
        << min_member.label << "\n";
    txt << "  min nonzero non-member height: " << (min_nonmember.best ? fmt12(*min_nonmember.best) : "-") << "  "
        << min_nonmember.label << "\n";

    out["elements"] = elems;
    out["non_members"] = non;
    out["summary"] = {{"constructed", elems.size()},
                      {"members", n_member},
                      {"inconclusive", n_inconclusive},
                      {"unrealizable", n_unrealizable},
                      {"sampled_non_members", non.size()},
                      {"certified_non_members", n_non},
                      {"misclassified", res.misclassified},
                      {"min_nonzero_member_height", min_member.json()},
                      {"min_nonzero_non_member_height", min_nonmember.json()}};
    return out;
}

// ---------------------------------------------------------------------------

Json kummer_section(const SurveyConfig& cfg, std::mt19937_64& rng, SurveyResult& res, std::ostringstream& txt)
{
    Json out;
    const TowerBase base = tower_base(cfg.a, cfg.p);
    const TowerLevel root = TowerLevel::make(cfg.p, 0, 0, cfg.a);
    out["lambda"] = root.lambda;
    out["v_b"] = root.v_b;
    out["p_divides_v_b"] = root.p_divides_vb;
    out["amoroso_condition"] = cfg.a.get_den() == 1 ? Json(amoroso_condition(cfg.a, cfg.p)) : Json(nullptr);
    txt << "Kummer towers K_{r,s}, p = " << cfg.p << ", lambda = " << root.lambda << ", v_p(b) = " << root.v_b << "\n";
    txt << "  level   degree  fixed   sigma                                          samples  ambiguous  min gap\n";
    Json levels = Json::array();
    for (int r = 0; r <= cfg.max_r; ++r) {
        for (int s = 0; s <= std::min(r, cfg.max_s); ++s) {
            if ((r == 0 && s == 0) || (r == 1 && s == 0)) continue;
            TowerLevel lvl = root.at(r, s);
            Json j;
            j["level"] = {r, s};
            j["degree"] = tower_degree(lvl);
            auto sub = subfield_rule(lvl);
            j["fixed_field"] = {sub.first, sub.second};
            bool index_ok = tower_degree(lvl) == cfg.p * tower_degree(lvl.at(sub.first, sub.second));
            Json chain = Json::array();
            std::pair<int, int> cur{r, s};
            chain.push_back({cur.first, cur.second});
            while (!((cur.first == 1 && cur.second == 0) || (cur.first == 0 && cur.second == 0))) {
                cur = subfield_rule(lvl.at(cur.first, cur.second));
                chain.push_back({cur.first, cur.second});
            }
            j["chain"] = chain;
            SigmaAction act = sigma_action(lvl);
            j["sigma"] = act.to_string();

            long ambiguous = 0, ok = 0;
            std::optional<Rational> min_gap;
            const long pr = lpow(cfg.p, r), ps = lpow(cfg.p, s);
            for (long i = 0; i < cfg.metric_samples; ++i) {
                long u = pick(rng, 0, pr - 1);
                long jj = pick(rng, 0, ps - 1);
                // Smallest power of p making the monomial integral, plus a random excess.
                Rational beta_val(jj * base.v_b, ps);
                beta_val.canonicalize();
                Integer need = -beta_val.get_num();
                mpz_cdiv_q(need.get_mpz_t(), need.get_mpz_t(), beta_val.get_den_mpz_t());
                long e = std::max(0L, need.get_si()) + pick(rng, 0, 2);
                long unit = pick(rng, 1, 40);
                while (unit % cfg.p == 0) ++unit;
                long den = pick(rng, 1, 9);
                while (den % cfg.p == 0) ++den;
                Rational c = rpow(Rational(cfg.p), e) * Rational(unit * (pick(rng, 0, 1) ? 1 : -1), den);
                TowerElement x = TowerElement::monomial(base, r, s, c, u, jj);
                try {
                    MetricGap g = metric_gap_check(lvl, x);
                    if (!g.bound_ok) ++res.failed_checks;
                    else ++ok;
                    if (!g.infinite && (!min_gap || g.exponent < *min_gap)) min_gap = g.exponent;
                } catch (const AmbiguityError&) {
                    ++ambiguous;
                }
            }
            j["samples"] = cfg.metric_samples;
            j["bound_ok"] = ok;
            j["ambiguous"] = ambiguous;
            j["min_gap_exponent"] = min_gap ? Json(min_gap->get_str()) : Json(nullptr);
            j["bound_exponent"] = Rational(1, lpow(cfg.p, 3)).get_str();
            j["index_p"] = index_ok;
            if (!index_ok) ++res.failed_checks;
            levels.push_back(j);

            char line[256];
            std::snprintf(line, sizeof line, "  %-7s %6ld  %-6s  %-46s %7ld  %9ld  %s\n", level_text(r, s).c_str(),
                          tower_degree(lvl), level_text(sub.first, sub.second).c_str(), act.to_string().c_str(),
                          cfg.metric_samples, ambiguous, min_gap ? min_gap->get_str().c_str() : "inf");
            txt << line;
        }
    }
    out["levels"] = levels;
    return out;
}

// ---------------------------------------------------------------------------

Json curve_section(const SurveyConfig& cfg, const EllipticCurve& E, const std::vector<MemberRecord>& members,
                   std::mt19937_64& rng, SurveyResult& res, std::ostringstream& txt)
{
    Json out;
    out["curve"] = {E.A().get_str(), E.B().get_str()};
    out["equation"] = E.to_string();
    out["discriminant"] = E.discriminant().get_str();
    txt << "Curve " << E.to_string() << "  (discriminant " << E.discriminant().get_str() << ")\n";

    Json ss = Json::array();
    std::string ss_list;
    for (long p = 5; p <= cfg.pmax; ++p) {
        if (!is_prime(p) || mpz_divisible_ui_p(E.discriminant().get_mpz_t(), static_cast<unsigned long>(p))) continue;
        long ap = ap_count(E, p);
        ss.push_back({{"p", p}, {"a_p", ap}, {"supersingular", ap == 0}});
        if (ap == 0) ss_list += " " + std::to_string(p);
    }
    out["supersingular_table"] = ss;
    txt << "  supersingular primes <= " << cfg.pmax << ":" << (ss_list.empty() ? " none" : ss_list) << "\n";

    // Integral points with |x| <= bound, y >= 0.
    Json pts = Json::array();
    std::vector<EcPoint> torsion, free_points;
    for (long x = -cfg.torsion_scan_bound; x <= cfg.torsion_scan_bound; ++x) {
        Integer rhs = Integer(x) * x * x + E.A() * x + E.B();
        if (rhs < 0) continue;
        auto y = exact_root(rhs, 2);
        if (!y) continue;
        EcPoint P = EcPoint::affine(x, *y);
        auto order = is_torsion(E, P);
        Json j{{"point", P.to_string()}, {"lutz_nagell_screen", lutz_nagell_screen(E, P)}};
        if (order) {
            NtHeight h = nt_height(E, P, HeightMode::local_sum);
            j["torsion_order"] = *order;
            j["nt_height"] = num12(h.value);
            if (h.value != 0.0 || *order > 12) ++res.failed_checks;
            torsion.push_back(P);
        } else {
            j["torsion_order"] = nullptr;
            free_points.push_back(P);
        }
        pts.push_back(j);
    }
    out["integral_points"] = pts;
    txt << "  integral points |x| <= " << cfg.torsion_scan_bound << ": " << pts.size() << " (torsion " << torsion.size()
        << ")\n";

    Json heights = Json::array();
    txt << "  point                 local_sum          limit              |diff|    places\n";
    std::vector<EcPoint> used;
    for (const auto& P : free_points) {
        if (static_cast<long>(used.size()) >= cfg.height_points) break;
        NtHeight ls = nt_height(E, P, HeightMode::local_sum, cfg.series_depth);
        NtHeight lim = nt_height(E, P, HeightMode::limit, cfg.limit_depth);
        double diff = std::fabs(ls.value - lim.value);
        Json entries = Json::array();
        std::string places;
        for (const auto& e : ls.breakdown->entries) {
            Json je{{"place", e.place == kArchimedean ? Json("inf") : Json(e.place)},
                    {"value", num12(e.value)},
                    {"method", to_string(e.method)},
                    {"error", num12(e.error)}};
            je["log_coefficient"] = e.coefficient ? Json(e.coefficient->get_str()) : Json(nullptr);
            if (e.closed_form_agrees) {
                je["closed_form_agrees"] = *e.closed_form_agrees;
                if (!*e.closed_form_agrees) ++res.failed_checks;
            }
            entries.push_back(je);
            places += (places.empty() ? "" : ",") + (e.place == kArchimedean ? std::string("inf") : std::to_string(e.place));
        }
        bool agree = diff <= cfg.agreement_tol;
        if (!agree) ++res.failed_checks;
        heights.push_back({{"point", P.to_string()},
                           {"local_sum", num12(ls.value)},
                           {"local_sum_error", num12(ls.error)},
                           {"limit", num12(lim.value)},
                           {"limit_error", num12(lim.error)},
                           {"difference", num12(diff)},
                           {"agree", agree},
                           {"breakdown", entries}});
        char line[256];
        std::snprintf(line, sizeof line, "  %-20s  %-17s  %-17s  %-8.2g  %s\n", P.to_string().c_str(), fmt12(ls.value).c_str(),
                      fmt12(lim.value).c_str(), diff, places.c_str());
        txt << line;
        used.push_back(P);
    }
    out["heights"] = heights;

    if (!used.empty()) {
        // Second point: another scanned point, else [2]P.
        const EcPoint Q = used.size() >= 2 ? used[1] : ec_mul(E, 2, used[0]);
        ParallelogramResult pg = parallelogram_check(E, used[0], Q, cfg.parallelogram_tol, cfg.series_depth);
        out["parallelogram"] = {{"P", used[0].to_string()}, {"Q", Q.to_string()}, {"residual", num12(pg.residual)}, {"ok", pg.ok}};
        if (!pg.ok) ++res.failed_checks;
        txt << "  parallelogram residual (P = " << used[0].to_string() << ", Q = " << Q.to_string() << "): " << fmt12(pg.residual) << "\n";
    } else {
        out["parallelogram"] = nullptr;
    }

    // Constructed members of <a>_sat^n x E_tors with a predictable witness.
    Json gammas = Json::array();
    std::vector<EcPoint> tors = torsion;
    tors.insert(tors.begin(), EcPoint::zero());
    long gamma_ok = 0;
    for (int i = 0; i < 4 && !members.empty(); ++i) {
        std::size_t count = static_cast<std::size_t>(pick(rng, 1, 3));
        std::vector<AlgebraicNumber> alphas;
        std::vector<std::string> labels;
        Integer expected = 1;
        for (std::size_t k = 0; k < count; ++k) {
            const auto& m = members[static_cast<std::size_t>(pick(rng, 0, static_cast<long>(members.size()) - 1))];
            alphas.push_back(m.number);
            labels.push_back(m.element.to_string());
            expected *= m.expected_n;
        }
        const EcPoint& T = tors[static_cast<std::size_t>(pick(rng, 0, static_cast<long>(tors.size()) - 1))];
        expected *= *is_torsion(E, T);
        GammaSatVerdict g = gamma_sat_check(alphas, E, T, cfg.a, cfg.membership_bound);
        bool ok = g.kind == SatVerdict::Kind::member && g.witness == expected;
        if (ok) ++gamma_ok;
        else ++res.misclassified;
        gammas.push_back({{"alphas", labels},
                          {"point", T.to_string()},
                          {"verdict", to_string(g.kind)},
                          {"witness", g.witness.get_str()},
                          {"expected_witness", expected.get_str()},
                          {"correct", ok}});
    }
    out["gamma_sat"] = gammas;
    txt << "  gamma_sat constructed cases: " << gammas.size() << " (witness reproduced " << gamma_ok << ")\n";
    return out;
}

Json statistics_section(const SurveyConfig& cfg, const std::optional<EllipticCurve>& first_curve, SurveyResult& res,
                        std::ostringstream& txt)
{
    Json out;
    Json gauss = Json::array();
    txt << "Statistics\n  gauss (a = " << cfg.a.get_str() << ", p = " << cfg.p << "):";
    std::optional<double> prev;
    for (long n = 0; n <= cfg.gauss_max_level; ++n) {
        GaussStatistic g = gauss_statistic(cfg.a, cfg.p, n);
        gauss.push_back({{"n", n}, {"value", num12(g.stat.value)}, {"exponent", g.exponent.get_str()}, {"limit", 1}});
        if (prev && g.stat.value < *prev) ++res.failed_checks;
        prev = g.stat.value;
        txt << " " << fmt12(g.stat.value);
    }
    txt << "\n";
    out["gauss"] = gauss;

    Json bern = Json::array();
    txt << "  bernoulli b2 grid means:";
    for (long N : cfg.bernoulli_grid) {
        Rational v = bernoulli_uniformity(uniform_grid(N));
        Rational expected(1, 6 * N * N);
        expected.canonicalize();
        bool ok = v == expected;
        if (!ok) ++res.failed_checks;
        bern.push_back({{"N", N}, {"exact", v.get_str()}, {"value", num12(v.get_d())}, {"matches_1_over_6N2", ok}});
        txt << " N=" << N << ":" << v.get_str();
    }
    txt << "\n";
    out["bernoulli"] = bern;

    if (first_curve) {
        Json suz = Json::array();
        txt << "  suz torsion averages on " << first_curve->to_string() << " (cap " << fmt12(cfg.suz_cap) << "):";
        for (long N : cfg.suz_orders) {
            OrbitStatistic s = suz_torsion_average(*first_curve, N, cfg.suz_cap, cfg.series_depth);
            suz.push_back({{"N", N}, {"samples", s.sample_count}, {"value", num12(s.value)}, {"error", num12(s.error)}, {"limit", 0}});
            txt << " N=" << N << ":" << fmt12(s.value);
        }
        txt << "\n";
        out["suz"] = suz;
    }
    return out;
}

}  // namespace

SurveyConfig parse_survey_config(const std::string& text)
{
    SurveyConfig cfg;
    const std::string body = trim(text);
    if (!body.empty() && body.front() == '{') {
        Json j;
        try {
            j = Json::parse(body);
        } catch (const std::exception& e) {
            throw ValidationError(std::string("config is not valid JSON: ") + e.what());
        }
        for (auto it = j.begin(); it != j.end(); ++it) apply_field(cfg, it.key(), json_scalar_text(it.key(), it.value()));
    } else {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
            apply_field(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
    validate_survey_config(cfg);
    return cfg;
}

SurveyConfig load_survey_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_survey_config(buf.str());
}

void validate_survey_config(const SurveyConfig& cfg)
{
    if (cfg.a == 1) bad_field("a", "a = 1 is excluded: <1>_sat is just the roots of unity");
    if (cfg.a == 0 || cfg.a == -1) bad_field("a", "must not be 0 or -1");
    if (cfg.p < 3 || !is_prime(cfg.p)) bad_field("p", "must be an odd prime");
    if (cfg.max_r < 0 || cfg.max_r > 4) bad_field("max_r", "must lie in [0, 4]");
    if (cfg.max_s < 0 || cfg.max_s > 4) bad_field("max_s", "must lie in [0, 4]");
    if (cfg.m_bound < 0 || cfg.m_bound > 20) bad_field("m_bound", "must lie in [0, 20]");
    if (cfg.u_bound < 0) bad_field("u_bound", "must be >= 0");
    if (cfg.membership_bound < 1) bad_field("membership_bound", "must be >= 1");
    if (cfg.nonmember_samples < 0) bad_field("nonmember_samples", "must be >= 0");
    if (cfg.metric_samples < 0) bad_field("metric_samples", "must be >= 0");
    for (const auto& [A, B] : cfg.curves)
        if (4 * A * A * A + 27 * B * B == 0) bad_field("curves", "curve " + A.get_str() + "," + B.get_str() + " is singular");
    if (cfg.torsion_scan_bound < 0) bad_field("torsion_scan_bound", "must be >= 0");
    if (cfg.height_points < 0) bad_field("height_points", "must be >= 0");
    if (cfg.series_depth < 1 || cfg.series_depth > 40) bad_field("series_depth", "must lie in [1, 40]");
    if (cfg.limit_depth < 1 || cfg.limit_depth > kMaxLimitDepth)
        bad_field("limit_depth", "must lie in [1, " + std::to_string(kMaxLimitDepth) + "]");
    if (cfg.pmax < 0 || cfg.pmax > 1000000) bad_field("pmax", "must lie in [0, 10^6]");
    for (long N : cfg.suz_orders)
        if (N < 3 || N > 13 || N % 2 == 0) bad_field("suz_orders", "entries must be odd and in [3, 13]");
    if (!(cfg.suz_cap > 0)) bad_field("suz_cap", "must be positive");
    if (cfg.gauss_max_level < 0 || cfg.gauss_max_level > 30) bad_field("gauss_max_level", "must lie in [0, 30]");
    for (long N : cfg.bernoulli_grid)
        if (N < 1 || N > 100000) bad_field("bernoulli_grid", "entries must lie in [1, 10^5]");
    if (!(cfg.parallelogram_tol > 0)) bad_field("parallelogram_tol", "must be positive");
    if (!(cfg.agreement_tol > 0)) bad_field("agreement_tol", "must be positive");
}

Json survey_config_json(const SurveyConfig& cfg)
{
    Json j;
    j["a"] = cfg.a.get_str();
    j["p"] = cfg.p;
    j["max_r"] = cfg.max_r;
    j["max_s"] = cfg.max_s;
    j["m_bound"] = cfg.m_bound;
    j["u_bound"] = cfg.u_bound;
    j["membership_bound"] = cfg.membership_bound;
    j["nonmember_samples"] = cfg.nonmember_samples;
    j["metric_samples"] = cfg.metric_samples;
    Json curves = Json::array();
    for (const auto& [A, B] : cfg.curves) curves.push_back(A.get_str() + "," + B.get_str());
    j["curves"] = curves;
    j["torsion_scan_bound"] = cfg.torsion_scan_bound;
    j["height_points"] = cfg.height_points;
    j["series_depth"] = cfg.series_depth;
    j["limit_depth"] = cfg.limit_depth;
    j["pmax"] = cfg.pmax;
    j["suz_orders"] = cfg.suz_orders;
    j["suz_cap"] = num12(cfg.suz_cap);
    j["gauss_max_level"] = cfg.gauss_max_level;
    j["bernoulli_grid"] = cfg.bernoulli_grid;
    j["seed"] = cfg.seed;
    j["parallelogram_tol"] = num12(cfg.parallelogram_tol);
    j["agreement_tol"] = num12(cfg.agreement_tol);
    return j;
}

SurveyResult run_survey(const SurveyConfig& cfg)
{
    validate_survey_config(cfg);
    SurveyResult res;
    std::mt19937_64 rng(cfg.seed);
    std::ostringstream txt;
    txt << "heightlab survey (seed " << cfg.seed << ")\n\n";

    Json results;
    std::vector<MemberRecord> members;
    results["saturation"] = saturation_section(cfg, rng, members, res, txt);
    txt << "\n";
    results["kummer"] = kummer_section(cfg, rng, res, txt);
    txt << "\n";
    std::optional<EllipticCurve> first;
    if (!cfg.curves.empty()) {
        Json curves = Json::array();
        for (const auto& [A, B] : cfg.curves) {
            EllipticCurve E(A, B);
            if (!first) first = E;
            curves.push_back(curve_section(cfg, E, members, rng, res, txt));
            txt << "\n";
        }
        results["elliptic"] = curves;
    }
    results["statistics"] = statistics_section(cfg, first, res, txt);
    results["misclassified"] = res.misclassified;
    results["failed_checks"] = res.failed_checks;
    txt << "\nmisclassified: " << res.misclassified << "   failed checks: " << res.failed_checks << "\n";

    Json bounds;
    bounds["series_tail"] = num12(std::ldexp(1.0, -2 * cfg.series_depth));
    bounds["limit_tail"] = num12(std::ldexp(1.0, -2 * cfg.limit_depth));
    bounds["agreement_tol"] = num12(cfg.agreement_tol);
    bounds["parallelogram_tol"] = num12(cfg.parallelogram_tol);
    res.report = make_record("survey", survey_config_json(cfg), results, bounds, std::nullopt);
    res.text = txt.str();
    return res;
}

void write_survey(const SurveyResult& result, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir);
    std::ofstream json(base / "survey_report.json");
    json << result.report.dump(2) << "\n";
    std::ofstream text(base / "survey_report.txt");
    text << result.text;
    if (!json || !text) throw ValidationError("cannot write survey report into " + dir);
}

}  // namespace heightlab
