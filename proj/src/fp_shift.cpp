#include "algdyn/fp_shift.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "algdyn/error.hpp"
#include "algdyn/fp_linalg.hpp"
#include "algdyn/number_theory.hpp"

namespace algdyn {

namespace {

using SparseRow = std::vector<std::pair<std::size_t, std::uint32_t>>;

// Every translate u^n g with n + supp(g) inside the window.
std::vector<SparseRow> constraint_rows(const FpShiftSystem& sys, const Box& window)
{
    std::vector<SparseRow> rows;
    const std::size_t d = sys.d;
    for (const auto& g : sys.generators) {
        const Exponent gmin = g.min_exponents(), gmax = g.max_exponents();
        Exponent lo(d), hi(d);
        bool empty = false;
        for (std::size_t j = 0; j < d; ++j) {
            lo[j] = window.lo[j] - gmin[j];
            hi[j] = window.hi[j] - gmax[j];
            if (lo[j] > hi[j]) empty = true;
        }
        if (empty) continue;
        const Box range{lo, hi};
        const std::size_t count = range.size();
        for (std::size_t t = 0; t < count; ++t) {
            const Exponent n = range.point(t);
            SparseRow row;
            for (const auto& [m, c] : g.terms()) {
                Exponent x(d);
                for (std::size_t j = 0; j < d; ++j) x[j] = n[j] + m[j];
                row.emplace_back(window.index(x), static_cast<std::uint32_t>(c.get_ui()));
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

Box bounding_box(const CylinderSpec& cyl)
{
    Box b{cyl.begin()->first, cyl.begin()->first};
    for (const auto& [n, v] : cyl)
        for (std::size_t j = 0; j < n.size(); ++j) {
            b.lo[j] = std::min(b.lo[j], n[j]);
            b.hi[j] = std::max(b.hi[j], n[j]);
        }
    return b;
}

mpq_class inverse_power(std::uint64_t p, std::size_t k)
{
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return mpq_class(1, den);
}

// Measure of the cylinder computed on a single window.
mpq_class measure_on_window(const FpShiftSystem& sys, const CylinderSpec& cyl, const Box& window)
{
    const std::size_t n = window.size();
    FpEchelon ech(n + 1, sys.p);   // column n carries the right-hand side
    for (const auto& row : constraint_rows(sys, window)) ech.insert(row);
    const std::size_t rank_c = ech.rank();
    for (const auto& [pt, v] : cyl) {
        SparseRow row{{window.index(pt), 1}};
        if (v % sys.p) row.emplace_back(n, static_cast<std::uint32_t>(v % sys.p));
        if (ech.insert(row) == static_cast<long>(n)) return 0;   // 0 = nonzero: inconsistent
    }
    return inverse_power(sys.p, ech.rank() - rank_c);
}

std::size_t boundary_points(const Box& b)
{
    const std::size_t total = b.size();
    bool thin = false;
    Box inner = b;
    for (std::size_t j = 0; j < b.dim(); ++j) {
        inner.lo[j] += 1;
        inner.hi[j] -= 1;
        if (inner.lo[j] > inner.hi[j]) thin = true;
    }
    return thin ? total : total - inner.size();
}

std::size_t max_generator_support(const FpShiftSystem& sys)
{
    std::size_t m = 0;
    for (const auto& g : sys.generators) m = std::max(m, g.size());
    return m;
}

// Does some vector with nonzero entries on all of S lie in the kernel of H restricted to S?
bool full_support_kernel_vector(const FpDense& h, const std::vector<std::size_t>& subset, std::uint64_t p)
{
    FpDense hs;
    for (const auto& row : h) {
        std::vector<std::uint32_t> r;
        for (auto c : subset) r.push_back(row[c]);
        hs.push_back(std::move(r));
    }
    const FpDense ker = nullspace(hs, subset.size(), p);
    if (ker.empty()) return false;
    for (std::size_t i = 0; i < subset.size(); ++i) {
        bool all_zero = true;
        for (const auto& v : ker) all_zero = all_zero && v[i] == 0;
        if (all_zero) return false;
    }
    // Fewer than p coordinate hyperplanes cannot cover F_p^k.
    if (subset.size() < p) return true;
    const std::size_t k = ker.size();
    double combos = std::pow(static_cast<double>(p), static_cast<double>(k));
    if (combos > 1e6) throw BudgetError("kernel too large to enumerate in support search");
    std::vector<std::uint32_t> coef(k, 0);
    for (std::size_t iter = 0; iter < static_cast<std::size_t>(combos); ++iter) {
        std::size_t t = iter;
        for (std::size_t j = 0; j < k; ++j) {
            coef[j] = static_cast<std::uint32_t>(t % p);
            t /= p;
        }
        bool ok = true;
        for (std::size_t i = 0; i < subset.size() && ok; ++i) {
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < k; ++j) s = (s + std::uint64_t{coef[j]} * ker[j][i]) % p;
            ok = s != 0;
        }
        if (ok) return true;
    }
    return false;
}

} // namespace

void FpShiftSystem::validate() const
{
    if (!is_prime(mpz_class(static_cast<unsigned long>(p)))) throw InputError(std::to_string(p) + " is not prime");
    if (d == 0) throw InputError("dimension must be at least 1");
    if (generators.empty()) throw InputError("an F_p shift system needs at least one generator");
    for (const auto& g : generators) {
        if (g.dim() != d) throw InputError("generator dimension does not match the system");
        if (g.ring() != CoeffRing::prime_field(p)) throw InputError("generators must have coefficients in F_p");
        if (g.is_zero()) throw InputError("the zero generator imposes no relation");
    }
}

FpShiftSystem FpShiftSystem::from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw InputError("system JSON must be an object");
    FpShiftSystem sys;
    sys.p = j.at("p").get<std::uint64_t>();
    sys.d = j.at("d").get<std::size_t>();
    const auto ring = CoeffRing::prime_field(sys.p);
    for (const auto& g : j.at("generators")) {
        if (g.is_string())
            sys.generators.push_back(parse_poly(g.get<std::string>(), sys.d, ring));
        else
            sys.generators.push_back(poly_from_json(g));
    }
    sys.validate();
    return sys;
}

nlohmann::json to_json(const FpShiftSystem& sys)
{
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : sys.generators) gens.push_back(g.to_string());
    return {{"p", sys.p}, {"d", sys.d}, {"generators", gens}};
}

Box Box::cube(std::size_t d, std::int64_t side)
{
    if (side < 1) throw InputError("box side must be positive");
    return {Exponent(d, 0), Exponent(d, side - 1)};
}

std::size_t Box::size() const
{
    std::size_t total = 1;
    for (std::size_t j = 0; j < dim(); ++j) {
        if (hi[j] < lo[j]) return 0;
        total *= static_cast<std::size_t>(hi[j] - lo[j] + 1);
    }
    return total;
}

bool Box::contains(const Exponent& n) const
{
    for (std::size_t j = 0; j < dim(); ++j)
        if (n[j] < lo[j] || n[j] > hi[j]) return false;
    return true;
}

std::size_t Box::index(const Exponent& n) const
{
    std::size_t idx = 0;
    for (std::size_t j = 0; j < dim(); ++j) idx = idx * static_cast<std::size_t>(hi[j] - lo[j] + 1) + static_cast<std::size_t>(n[j] - lo[j]);
    return idx;
}

Exponent Box::point(std::size_t index) const
{
    Exponent n(dim());
    for (std::size_t j = dim(); j-- > 0;) {
        const auto side = static_cast<std::size_t>(hi[j] - lo[j] + 1);
        n[j] = lo[j] + static_cast<std::int64_t>(index % side);
        index /= side;
    }
    return n;
}

Box Box::expanded(std::int64_t by) const
{
    Box b = *this;
    for (std::size_t j = 0; j < dim(); ++j) {
        b.lo[j] -= by;
        b.hi[j] += by;
    }
    return b;
}

WindowCount window_count(const FpShiftSystem& sys, const Box& window)
{
    sys.validate();
    if (window.dim() != sys.d || window.size() == 0) throw InputError("window must be a nonempty box of dimension d");
    const std::size_t n = window.size();
    FpEchelon ech(n, sys.p);
    const auto rows = constraint_rows(sys, window);
    for (const auto& row : rows) ech.insert(row);
    WindowCount w;
    w.window = window;
    w.constraint_rows = rows.size();
    w.constraint_rank = ech.rank();
    w.free_dimension = n - ech.rank();
    w.discrepancy_bound = boundary_points(window) * max_generator_support(sys);
    return w;
}

CylinderSpec shift_cylinder(const CylinderSpec& cyl, const Exponent& m)
{
    CylinderSpec out;
    for (const auto& [n, v] : cyl) {
        Exponent x = n;
        for (std::size_t j = 0; j < x.size(); ++j) x[j] += m[j];
        out[x] = v;
    }
    return out;
}

CylinderMeasure cylinder_measure(const FpShiftSystem& sys, const CylinderSpec& cyl, const HaloOptions& opts)
{
    sys.validate();
    if (cyl.empty()) throw InputError("a cylinder needs at least one assignment");
    for (const auto& [n, v] : cyl)
        if (n.size() != sys.d) throw InputError("cylinder coordinate has the wrong dimension");
    CylinderSpec reduced;
    for (const auto& [n, v] : cyl) reduced[n] = static_cast<std::uint32_t>(v % sys.p);

    const Box core = bounding_box(reduced);
    CylinderMeasure m;
    for (std::size_t h = opts.halo; h <= opts.max_halo; ++h) {
        const Box window = core.expanded(static_cast<std::int64_t>(h));
        if (window.size() > opts.max_points)
            throw BudgetError("cylinder window of " + std::to_string(window.size()) + " points exceeds budget");
        m.history.push_back(measure_on_window(sys, reduced, window));
        m.window_points = window.size();
        const std::size_t k = m.history.size();
        if (k >= 3 && m.history[k - 1] == m.history[k - 2] && m.history[k - 2] == m.history[k - 3]) {
            m.value = m.history[k - 1];
            m.halo = h - 2;
            return m;
        }
    }
    throw ConvergenceError("cylinder measure did not stabilize by halo " + std::to_string(opts.max_halo), 0.0);
}

MixingDefectTrace mixing_defect(const FpShiftSystem& sys, const std::vector<Exponent>& shape,
                                const std::vector<CylinderSpec>& cylinders, const std::vector<std::int64_t>& k_list,
                                const HaloOptions& opts)
{
    if (shape.empty()) throw InputError("mixing shape must be nonempty");
    if (cylinders.size() != 1 && cylinders.size() != shape.size())
        throw InputError("give one cylinder per shape point, or a single cylinder for all");
    auto cylinder_at = [&](std::size_t i) -> const CylinderSpec& { return cylinders[cylinders.size() == 1 ? 0 : i]; };

    MixingDefectTrace t;
    t.shape = shape;
    t.product_target = 1;
    for (std::size_t i = 0; i < shape.size(); ++i) t.product_target *= cylinder_measure(sys, cylinder_at(i), opts).value;

    for (const auto k : k_list) {
        CylinderSpec combined;
        bool conflict = false;
        for (std::size_t i = 0; i < shape.size() && !conflict; ++i) {
            Exponent m = shape[i];
            for (auto& x : m) x *= k;
            for (const auto& [n, v] : shift_cylinder(cylinder_at(i), m)) {
                const auto [it, inserted] = combined.emplace(n, v % sys.p);
                if (!inserted && it->second != v % sys.p) conflict = true;
            }
        }
        MixingDefectEntry e{k, 0, 0, 0};
        if (!conflict) {
            const auto cm = cylinder_measure(sys, combined, opts);
            e.measured = cm.value;
            e.halo = cm.halo;
        }
        e.defect = e.measured - t.product_target;
        t.entries.push_back(e);
    }
    return t;
}

std::vector<SupportSet> ideal_support_search(const FpShiftSystem& sys, const Box& box, std::size_t max_support,
                                             std::size_t subset_budget)
{
    sys.validate();
    if (max_support == 0) throw InputError("max_support must be at least 1");
    if (box.dim() != sys.d || box.size() == 0) throw InputError("search box must be a nonempty box of dimension d");
    const std::size_t n = box.size();
    if (n > 4096) throw BudgetError("search box of " + std::to_string(n) + " points exceeds the rank budget");
    double subsets = 0.0, binom = 1.0;
    for (std::size_t s = 1; s <= std::min(max_support, n); ++s) {
        binom = binom * static_cast<double>(n - s + 1) / static_cast<double>(s);
        subsets += binom;
    }
    if (subsets > static_cast<double>(subset_budget))
        throw BudgetError("support search needs " + std::to_string(static_cast<std::size_t>(subsets)) +
                          " subsets, over budget " + std::to_string(subset_budget));

    // V = span of translates inside the box; x lies in V iff H x = 0 for H spanning the dual of V.
    FpDense rows;
    for (const auto& sparse : constraint_rows(sys, box)) {
        std::vector<std::uint32_t> r(n, 0);
        for (const auto& [c, v] : sparse) r[c] = static_cast<std::uint32_t>((r[c] + v) % sys.p);
        rows.push_back(std::move(r));
    }
    const FpDense h = rows.empty() ? FpDense{} : nullspace(rows, n, sys.p);
    // Columns of H, bit-packed for the p = 2 test.
    const std::size_t words = (h.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> column(n, std::vector<std::uint64_t>(words, 0));
    for (std::size_t r = 0; r < h.size(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (h[r][c] & 1) column[c][r / 64] |= std::uint64_t{1} << (r % 64);

    std::set<SupportSet> found;
    std::vector<std::size_t> subset;
    std::vector<std::uint64_t> acc(words, 0);
    auto record = [&] {
        SupportSet s;
        for (auto c : subset) s.points.insert(box.point(c));
        found.insert(s.canonical());
    };
    std::function<void(std::size_t)> dfs = [&](std::size_t start) {
        for (std::size_t c = start; c < n; ++c) {
            subset.push_back(c);
            if (sys.p == 2) {
                for (std::size_t w = 0; w < words; ++w) acc[w] ^= column[c][w];
                if (std::all_of(acc.begin(), acc.end(), [](std::uint64_t x) { return x == 0; })) record();
            } else if (full_support_kernel_vector(h, subset, sys.p)) {
                record();
            }
            if (subset.size() < max_support) dfs(c + 1);
            if (sys.p == 2)
                for (std::size_t w = 0; w < words; ++w) acc[w] ^= column[c][w];
            subset.pop_back();
        }
    };
    dfs(0);

    std::vector<SupportSet> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const SupportSet& a, const SupportSet& b) { return a.size() < b.size(); });
    return out;
}

LaurentPoly frobenius_dilate(const LaurentPoly& f, unsigned k)
{
    if (f.ring().is_integers()) throw InputError("Frobenius dilation needs coefficients in F_p");
    LaurentPoly g = f;
    for (unsigned i = 0; i < k; ++i) g = g.pow(f.ring().p);
    return g;
}

WindowEntropyTrace window_entropy_trace(const FpShiftSystem& sys, const std::vector<std::int64_t>& n_list)
{
    sys.validate();
    if (n_list.empty()) throw InputError("empty window list");
    WindowEntropyTrace t;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (i && n_list[i] <= n_list[i - 1]) throw InputError("window sizes must increase");
        const auto w = window_count(sys, Box::cube(sys.d, n_list[i]));
        mpq_class rate(static_cast<unsigned long>(w.free_dimension), static_cast<unsigned long>(w.window.size()));
        rate.canonicalize();
        t.entries.push_back({n_list[i], w.free_dimension, rate,
                             static_cast<double>(w.free_dimension) * std::log(static_cast<double>(sys.p)) /
                                 static_cast<double>(w.window.size()),
                             w.discrepancy_bound});
    }
    if (sys.generators.size() == 1) t.expected_limit = 0.0;
    return t;
}

nlohmann::json to_json(const WindowCount& w)
{
    return {{"window_lo", w.window.lo},
            {"window_hi", w.window.hi},
            {"constraint_rows", w.constraint_rows},
            {"constraint_rank", w.constraint_rank},
            {"free_dimension", w.free_dimension},
            {"discrepancy_bound", w.discrepancy_bound}};
}

nlohmann::json to_json(const CylinderMeasure& m)
{
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& v : m.history) hist.push_back(v.get_str());
    return {{"measure", m.value.get_str()}, {"halo", m.halo}, {"history", hist}, {"window_points", m.window_points}};
}

nlohmann::json to_json(const MixingDefectTrace& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : t.entries)
        rows.push_back({{"k", e.k}, {"measured", e.measured.get_str()}, {"defect", e.defect.get_str()}, {"halo", e.halo}});
    return {{"shape", t.shape}, {"product_target", t.product_target.get_str()}, {"entries", rows}};
}

nlohmann::json to_json(const WindowEntropyTrace& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : t.entries)
        rows.push_back({{"n", e.n},
                        {"free_dimension", e.free_dimension},
                        {"rate_over_log_p", e.rate_over_log_p.get_str()},
                        {"rate", e.rate},
                        {"discrepancy_bound", e.discrepancy_bound}});
    nlohmann::json j{{"trace", rows}};
    j["expected_limit"] = t.expected_limit ? nlohmann::json(*t.expected_limit) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const std::vector<SupportSet>& supports)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : supports) {
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& p : s.points) pts.push_back(p);
        out.push_back(pts);
    }
    return out;
}

} // namespace algdyn
