#include "algdyn/cli.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "algdyn/error.hpp"
#include "algdyn/fk_det.hpp"
#include "algdyn/fp_shift.hpp"
#include "algdyn/mahler_local.hpp"
#include "algdyn/mahler_torus.hpp"
#include "algdyn/number_theory.hpp"
#include "algdyn/periodic.hpp"

#include <Eigen/Dense>

namespace algdyn::cli {

namespace {

using nlohmann::json;

struct Config {
    std::string poly;
    std::size_t d = 0;
    std::string matrix;
    std::string system;
    std::string group;
    std::string grid;
    std::string schedule;
    std::string n_list;
    std::string k_list;
    std::string shape;
    std::string cylinder;
    std::string slice;
    std::string trace;
    std::string window;
    std::string box;
    std::string method = "compare";
    std::string format = "json";
    std::optional<std::uint64_t> p;
    std::optional<double> probe;
    std::optional<double> target;
    std::optional<unsigned> frobenius;
    double tolerance = 1e-3;
    std::int64_t radius = 16;
    unsigned order = 20;
    std::size_t max_support = 3;
    std::size_t halo = 0;
    std::size_t max_halo = 8;
    std::size_t exact_threshold = 4096;
    std::size_t budget = std::size_t{1} << 26;
    unsigned threads = 1;
    bool compare = false;
    bool keep_torsion = false;
};

std::string read_source(const std::string& arg)
{
    if (std::filesystem::is_regular_file(arg)) {
        std::ifstream in(arg);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    return arg;
}

json parse_json_arg(const std::string& arg, const char* what)
{
    const std::string text = read_source(arg);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON for ") + what + ": " + e.what(), e.byte);
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& text, const char* what)
{
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoll(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError(std::string("bad integer '") + tok + "' in " + what);
        }
    }
    if (out.empty()) throw InputError(std::string("empty list for ") + what);
    return out;
}

std::vector<std::size_t> positive_list(const std::string& text, const char* what)
{
    std::vector<std::size_t> out;
    for (auto v : parse_int_list(text, what)) {
        if (v < 1) throw InputError(std::string(what) + " entries must be positive");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

// "a:b:step"
std::array<std::size_t, 3> parse_schedule(const std::string& text)
{
    std::array<std::size_t, 3> v{0, 0, 1};
    std::stringstream ss(text);
    std::string tok;
    std::size_t i = 0;
    while (std::getline(ss, tok, ':')) {
        if (i >= 3) throw InputError("schedule must be a:b or a:b:step");
        try {
            v[i++] = std::stoul(tok);
        } catch (const std::exception&) {
            throw InputError("bad schedule entry '" + tok + "'");
        }
    }
    if (i < 2) throw InputError("schedule must be a:b or a:b:step");
    return v;
}

// "0,0;1,0;0,1"
std::vector<Exponent> parse_points(const std::string& text, std::size_t d)
{
    std::vector<Exponent> pts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        auto p = parse_int_list(tok, "point");
        if (p.size() != d) throw InputError("point '" + tok + "' does not have " + std::to_string(d) + " coordinates");
        pts.push_back(p);
    }
    if (pts.empty()) throw InputError("empty point list");
    return pts;
}

// "0,0=0;2,0=1"
CylinderSpec parse_cylinder(const std::string& text, std::size_t d)
{
    CylinderSpec cyl;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        if (tok.empty()) continue;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw InputError("cylinder assignment '" + tok + "' needs '='");
        const auto pt = parse_int_list(tok.substr(0, eq), "cylinder coordinate");
        const auto val = parse_int_list(tok.substr(eq + 1), "cylinder value");
        if (pt.size() != d || val.size() != 1 || val[0] < 0) throw InputError("bad cylinder assignment '" + tok + "'");
        cyl[pt] = static_cast<std::uint32_t>(val[0]);
    }
    if (cyl.empty()) throw InputError("empty cylinder");
    return cyl;
}

RationalMatrix read_matrix(const std::string& arg)
{
    const std::string text = read_source(arg);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[' && text.find("[[") != std::string::npos)
        return rational_matrix_from_json(parse_json_arg(text, "matrix"));
    return parse_rational_matrix(text);
}

std::size_t infer_dim(const std::string& poly)
{
    // Largest variable index mentioned: u1..ud, else u/v/w.
    std::size_t d = 1;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        if (poly[i] == 'u' && i + 1 < poly.size() && std::isdigit(static_cast<unsigned char>(poly[i + 1]))) {
            std::size_t j = i + 1, v = 0;
            while (j < poly.size() && std::isdigit(static_cast<unsigned char>(poly[j]))) v = v * 10 + static_cast<std::size_t>(poly[j++] - '0');
            d = std::max(d, v);
        } else if (poly[i] == 'v') {
            d = std::max<std::size_t>(d, 2);
        } else if (poly[i] == 'w') {
            d = std::max<std::size_t>(d, 3);
        }
    }
    return d;
}

LaurentPoly read_poly(const Config& c, CoeffRing ring = {})
{
    if (c.poly.empty()) throw InputError("--poly is required");
    const std::string text = read_source(c.poly);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return poly_from_json(parse_json_arg(text, "polynomial"));
    return parse_poly(text, c.d ? c.d : infer_dim(text), ring);
}

GridOptions grid_options(const Config& c)
{
    GridOptions o;
    o.max_points = c.budget;
    o.threads = c.threads;
    return o;
}

GridSpec read_grid(const Config& c, std::size_t d)
{
    auto orders = positive_list(c.grid, "--grid");
    if (orders.size() == 1) return GridSpec::square(orders[0], d);
    if (orders.size() != d) throw InputError("--grid needs 1 or d orders");
    return {orders};
}

json run_mahler(const Config& c)
{
    const auto f = read_poly(c);
    if (f.dim() != 1) throw InputError("mahler expects a polynomial in one variable");
    const IntPoly g = IntPoly::from_laurent(f);
    json j;
    if (c.p) {
        const auto local = padic_mahler(g, mpz_class(static_cast<unsigned long>(*c.p)));
        j = {{"p", std::to_string(*c.p)}, {"log_multiplier", local.log_multiplier.get_str()}, {"m_p", local.value},
             {"method", "newton_polygon"}};
    } else {
        const auto m = mahler_1d(g);
        j = {{"m", m.value}, {"method", "jensen"}, {"error_bound", m.error_bound}, {"roots_outside", m.roots_outside},
             {"roots_on_circle", m.roots_on}};
        if (c.compare) {
            const auto r = riemann_mahler(f, GridSpec::square(1 << 16, 1), grid_options(c));
            const double gap = std::abs(r.value - m.value);
            j["compare"] = {{"riemann_n", 1 << 16}, {"riemann_value", r.value}, {"gap", gap}};
            if (gap > 1e-2) throw ConsistencyError("Jensen and Riemann-sum values differ by " + std::to_string(gap));
        }
    }
    j["poly"] = f.to_string();
    return j;
}

json run_local_entropy(const Config& c)
{
    if (c.matrix.empty()) throw InputError("--matrix is required");
    const auto report = solenoid_entropy(read_matrix(c.matrix));
    json j = to_json(report);
    if (c.compare) {
        // prod p^{multiplier} over finite places must equal s exactly.
        mpz_class product = 1;
        for (const auto& place : report.places) {
            if (!place.prime) continue;
            const mpq_class& mult = place.log_multiplier;
            if (mult.get_den() != 1) throw ConsistencyError("non-integral local multiplier " + mult.get_str());
            mpz_class pw;
            mpz_pow_ui(pw.get_mpz_t(), place.prime->get_mpz_t(), mult.get_num().get_ui());
            product *= pw;
        }
        j["compare"] = {{"finite_product", product.get_str()}, {"clearing_s", report.char_poly.clearing_s.get_str()}};
        if (product != report.char_poly.clearing_s) throw ConsistencyError("local-global identity fails");
    }
    return j;
}

json run_torus_mahler(const Config& c, std::ostream& out, bool& wrote_csv)
{
    const auto f = read_poly(c);
    const auto opts = grid_options(c);
    if (!c.slice.empty()) {
        json rows = json::array();
        for (auto n : parse_int_list(c.slice, "--slice")) rows.push_back({{"n", n}, {"m", lawton_slice(f, n)}});
        return {{"lawton_slices", rows}, {"poly", f.to_string()}};
    }
    if (!c.schedule.empty()) {
        const auto s = parse_schedule(c.schedule);
        const auto sched = square_schedule(f, s[0], s[1], s[2], !c.keep_torsion);
        const auto trace = mahler_nd(f, sched, c.tolerance, c.target, opts);
        if (c.format == "csv") {
            out << to_csv(trace);
            wrote_csv = true;
            return {};
        }
        json j = to_json(trace);
        j["poly"] = f.to_string();
        return j;
    }
    if (c.grid.empty()) throw InputError("torus-mahler needs --grid, --schedule or --slice");
    const auto spec = read_grid(c, f.dim());
    if (c.probe) {
        json hits = json::array();
        for (const auto& h : unitary_variety_probe(f, spec, *c.probe, opts))
            hits.push_back({{"index", h.index}, {"abs", h.abs_value}, {"certified_zero", h.certified_zero}});
        return {{"spec", spec.orders}, {"threshold", *c.probe}, {"hits", hits}, {"poly", f.to_string()}};
    }
    const auto r = riemann_mahler(f, spec, opts);
    json j = to_json(r);
    j["poly"] = f.to_string();
    if (c.compare && f.dim() == 1) {
        const double m = mahler_1d(IntPoly::from_laurent(f)).value;
        j["compare"] = {{"mahler_1d", m}, {"gap", std::abs(m - r.value)}};
        if (std::abs(m - r.value) > c.tolerance)
            throw ConsistencyError("grid value differs from the Jensen value by " + std::to_string(std::abs(m - r.value)));
    }
    return j;
}

json run_periodic(const Config& c, std::ostream& out, bool& wrote_csv)
{
    std::vector<std::size_t> ns;
    if (!c.n_list.empty()) {
        ns = positive_list(c.n_list, "--n");
    } else if (!c.schedule.empty()) {
        const auto s = parse_schedule(c.schedule);
        for (std::size_t n = s[0]; n <= s[1]; n += std::max<std::size_t>(1, s[2])) ns.push_back(n);
    } else {
        throw InputError("periodic needs --n or --schedule");
    }
    PeriodicOptions po;
    po.grid = grid_options(c);
    po.exact_threshold = c.exact_threshold;

    if (!c.matrix.empty()) {
        const IntMatrix a = to_integer_matrix(read_matrix(c.matrix));
        if (ns.size() == 1) {
            const auto count = toral_periodic_count(a, ns[0]);
            json j = to_json(count);
            if (c.compare) {
                // |det(A^n - I)| = prod |lambda^n - 1|.
                Eigen::MatrixXd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
                for (std::size_t i = 0; i < a.rows(); ++i)
                    for (std::size_t k = 0; k < a.cols(); ++k)
                        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = a(i, k).get_d();
                Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
                double lg = 0.0;
                for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
                    lg += std::log(std::abs(std::pow(es.eigenvalues()(i), static_cast<double>(ns[0])) - 1.0));
                const double gap = std::abs(lg - log_abs(count.count));
                j["compare"] = {{"log_eigen_product", lg}, {"log_gap", gap}};
                if (count.count != 0 && gap > 1e-6)
                    throw ConsistencyError("eigenvalue product disagrees with the exact count");
            }
            return j;
        }
        const auto trace = growth_rate_trace(a, ns);
        if (c.format == "csv") {
            out << to_csv(trace);
            wrote_csv = true;
            return {};
        }
        return to_json(trace);
    }
    const auto f = read_poly(c);
    if (ns.size() == 1) {
        json j = to_json(principal_periodic_count(f, ns[0], po));
        j["poly"] = f.to_string();
        j["exact_threshold"] = po.exact_threshold;
        return j;
    }
    const auto trace = growth_rate_trace(f, ns, po);
    if (c.format == "csv") {
        out << to_csv(trace);
        wrote_csv = true;
        return {};
    }
    json j = to_json(trace);
    j["poly"] = f.to_string();
    return j;
}

FpShiftSystem read_system(const Config& c)
{
    if (c.system.empty()) throw InputError("--system is required");
    return FpShiftSystem::from_json(parse_json_arg(c.system, "system"));
}

HaloOptions halo_options(const Config& c)
{
    HaloOptions h;
    h.halo = c.halo;
    h.max_halo = std::max(c.max_halo, c.halo + 2);
    return h;
}

json run_fp_system(const Config& c)
{
    if (c.frobenius) {
        if (!c.p) throw InputError("--frobenius needs --p");
        const auto f = read_poly(c, CoeffRing::prime_field(*c.p));
        const auto g = frobenius_dilate(f, *c.frobenius);
        return {{"poly", f.to_string()}, {"p", *c.p}, {"k", *c.frobenius}, {"dilate", g.to_string()}};
    }
    const auto sys = read_system(c);
    json j{{"system", to_json(sys)}};
    if (!c.window.empty()) {
        const auto sides = parse_int_list(c.window, "--window");
        Box b = Box::cube(sys.d, sides[0]);
        if (sides.size() == sys.d)
            for (std::size_t i = 0; i < sys.d; ++i) b.hi[i] = sides[i] - 1;
        j["window_count"] = to_json(window_count(sys, b));
    } else if (!c.trace.empty()) {
        j["window_entropy"] = to_json(window_entropy_trace(sys, parse_int_list(c.trace, "--trace")));
    } else if (!c.cylinder.empty()) {
        j["cylinder"] = to_json(cylinder_measure(sys, parse_cylinder(c.cylinder, sys.d), halo_options(c)));
        j["halo_budget"] = halo_options(c).max_halo;
    } else if (!c.box.empty()) {
        const auto sides = parse_int_list(c.box, "--box");
        Box b = Box::cube(sys.d, sides[0]);
        if (sides.size() == sys.d)
            for (std::size_t i = 0; i < sys.d; ++i) b.hi[i] = sides[i] - 1;
        j["box"] = {{"lo", b.lo}, {"hi", b.hi}};
        j["max_support"] = c.max_support;
        j["supports"] = to_json(ideal_support_search(sys, b, c.max_support));
    } else {
        throw InputError("fp-system needs one of --window, --trace, --cylinder, --box or --frobenius");
    }
    return j;
}

json run_mixing(const Config& c)
{
    const auto sys = read_system(c);
    if (c.shape.empty() || c.k_list.empty()) throw InputError("mixing needs --shape and --k");
    const auto shape = parse_points(c.shape, sys.d);
    std::vector<CylinderSpec> cyl;
    if (c.cylinder.empty())
        cyl.push_back({{Exponent(sys.d, 0), 0}});
    else
        cyl.push_back(parse_cylinder(c.cylinder, sys.d));
    const auto trace = mixing_defect(sys, shape, cyl, parse_int_list(c.k_list, "--k"), halo_options(c));
    json j = to_json(trace);
    j["system"] = to_json(sys);
    json b = json::array();
    for (const auto& [pt, v] : cyl.front()) b.push_back({{"n", pt}, {"value", v}});
    j["cylinder"] = b;
    return j;
}

json run_fkdet(const Config& c)
{
    std::optional<GroupRingElement> f;
    if (!c.group.empty())
        f = GroupRingElement::from_json(parse_json_arg(c.group, "group ring element"));
    else
        f = GroupRingElement::from_laurent(read_poly(c));
    json j{{"element", to_json(*f)}, {"method", c.method}};
    if (c.method == "finite") {
        j["estimate"] = to_json(finite_section_logdet(*f, c.radius));
    } else if (c.method == "trace") {
        j["estimate"] = to_json(trace_series_logdet(*f, c.order));
    } else if (c.method == "compare") {
        const auto cmp = compare_estimators(*f, c.radius, c.order);
        j["comparison"] = to_json(cmp);
        if (c.compare && cmp.trace_series && cmp.reference) {
            const double gap = std::abs(cmp.trace_series->value - *cmp.reference);
            if (gap > cmp.trace_series->tail_bound + 1e-6)
                throw ConsistencyError("trace series and Mahler reference differ by " + std::to_string(gap));
        }
    } else {
        throw InputError("--method must be finite, trace or compare");
    }
    j["radius"] = c.radius;
    j["order"] = c.order;
    return j;
}

int report_error(const Error& e, int code, const std::string& command, std::ostream& out, std::ostream& err)
{
    json detail{{"kind", e.kind()}, {"message", e.what()}, {"exit_code", code}};
    if (const auto* pe = dynamic_cast<const ParseError*>(&e)) detail["position"] = pe->position();
    if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) detail["achieved_precision"] = ce->achieved();
    err << json{{"error", detail}}.dump() << '\n';
    if (code == 3) out << json{{"command", command}, {"status", "failed"}, {"error", detail}}.dump(2) << '\n';
    return code;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Config c;
    CLI::App app{"Mahler measures, entropies, periodic points and mixing of algebraic actions", "algdyn"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "algdyn 1.0");

    auto common = [&](CLI::App* sub) {
        sub->add_option("--threads", c.threads, "Worker threads for grid reductions")->check(CLI::PositiveNumber);
        sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--budget", c.budget, "Maximum grid points")->check(CLI::PositiveNumber);
        sub->add_flag("--compare", c.compare, "Run cross-module oracles and fail on disagreement");
    };
    auto poly_opts = [&](CLI::App* sub) {
        sub->add_option("--poly", c.poly, "Polynomial text, JSON, or a file holding either");
        sub->add_option("--d", c.d, "Number of variables (inferred from the text by default)");
    };

    auto* mahler = app.add_subcommand("mahler", "One-variable Mahler measure (Jensen) or p-adic measure");
    poly_opts(mahler);
    mahler->add_option("--p", c.p, "Prime for the p-adic Mahler measure");
    common(mahler);

    auto* local = app.add_subcommand("local-entropy", "Entropy of a rational matrix on the solenoid, by place");
    local->add_option("--matrix", c.matrix, "Rows separated by ';', entries by ',' (or JSON, or a file)");
    common(local);

    auto* torus = app.add_subcommand("torus-mahler", "Riemann sums of log|f| over finite subgroups of the torus");
    poly_opts(torus);
    torus->add_option("--grid", c.grid, "n or n1,...,nd");
    torus->add_option("--schedule", c.schedule, "Square grids a:b:step");
    torus->add_option("--tolerance", c.tolerance, "Tolerance for the last trace difference");
    torus->add_option("--target", c.target, "Reference value attached to the trace");
    torus->add_flag("--keep-torsion", c.keep_torsion, "Keep grid orders sharing factors with zeros of f");
    torus->add_option("--probe", c.probe, "List grid points with |f| below this threshold");
    torus->add_option("--slice", c.slice, "Lawton slices m(f(u,u^n)) for these n");
    common(torus);

    auto* periodic = app.add_subcommand("periodic", "Periodic-point counts and growth rates");
    periodic->add_option("--matrix", c.matrix, "Integer matrix of a toral automorphism");
    poly_opts(periodic);
    periodic->add_option("--n", c.n_list, "Periods, comma separated");
    periodic->add_option("--schedule", c.schedule, "Periods a:b:step");
    periodic->add_option("--exact-threshold", c.exact_threshold, "Largest |K| for the exact determinant");
    common(periodic);

    auto* fp = app.add_subcommand("fp-system", "Window counts, cylinder measures and ideal supports over F_p");
    fp->add_option("--system", c.system, "System JSON or file");
    poly_opts(fp);
    fp->add_option("--p", c.p, "Prime for --frobenius");
    fp->add_option("--window", c.window, "Window count on a box of these sides");
    fp->add_option("--trace", c.trace, "Window entropy trace for these n");
    fp->add_option("--cylinder", c.cylinder, "Cylinder 'x1,x2=v;...'");
    fp->add_option("--halo", c.halo, "First halo");
    fp->add_option("--max-halo", c.max_halo, "Last halo tried");
    fp->add_option("--box", c.box, "Ideal support search box sides");
    fp->add_option("--max-support", c.max_support, "Largest support size searched");
    fp->add_option("--frobenius", c.frobenius, "Frobenius dilation exponent k (f^(p^k))");
    common(fp);

    auto* mixing = app.add_subcommand("mixing", "Exact mixing defects of cylinder intersections");
    mixing->add_option("--system", c.system, "System JSON or file");
    mixing->add_option("--shape", c.shape, "Shape F as 'x1,x2;...'");
    mixing->add_option("--k", c.k_list, "Dilations, comma separated");
    mixing->add_option("--cylinder", c.cylinder, "Cylinder B (default x_0 = 0)");
    mixing->add_option("--halo", c.halo, "First halo");
    mixing->add_option("--max-halo", c.max_halo, "Last halo tried");
    common(mixing);

    auto* fk = app.add_subcommand("fkdet", "Fuglede-Kadison log-determinant estimates");
    poly_opts(fk);
    fk->add_option("--element", c.group, "Group ring element JSON or file");
    fk->add_option("--radius", c.radius, "Finite-section radius")->check(CLI::PositiveNumber);
    fk->add_option("--order", c.order, "Trace-series order");
    fk->add_option("--method", c.method, "finite | trace | compare");
    common(fk);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e, out, err);
        err << json{{"error", {{"kind", "usage"}, {"message", e.what()}, {"exit_code", 2}}}}.dump() << '\n';
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        bool wrote_csv = false;
        json report;
        if (command == "mahler")
            report = run_mahler(c);
        else if (command == "local-entropy")
            report = run_local_entropy(c);
        else if (command == "torus-mahler")
            report = run_torus_mahler(c, out, wrote_csv);
        else if (command == "periodic")
            report = run_periodic(c, out, wrote_csv);
        else if (command == "fp-system")
            report = run_fp_system(c);
        else if (command == "mixing")
            report = run_mixing(c);
        else
            report = run_fkdet(c);
        if (!wrote_csv) {
            if (c.format == "csv") throw InputError("CSV output is only available for traces");
            report["command"] = command;
            out << report.dump(2) << '\n';
        }
        return 0;
    } catch (const InputError& e) {
        return report_error(e, 2, command, out, err);
    } catch (const Error& e) {
        return report_error(e, 3, command, out, err);
    } catch (const nlohmann::json::exception& e) {
        return report_error(InputError(e.what()), 2, command, out, err);
    }
}

} // namespace algdyn::cli
