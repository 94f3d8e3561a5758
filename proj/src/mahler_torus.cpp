#include "algdyn/mahler_torus.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "algdyn/error.hpp"
#include "algdyn/mahler_local.hpp"

namespace algdyn {

namespace {

struct Kahan {
    double sum = 0.0, carry = 0.0;
    void add(double x)
    {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct SlabSum {
    double sum = 0.0;
    double carry = 0.0;
    double min_abs = std::numeric_limits<double>::infinity();
};

SlabSum sum_slab(const GridEvaluation& eval, std::size_t begin, std::size_t end)
{
    Kahan k;
    SlabSum s;
    for (std::size_t i = begin; i < end; ++i) {
        if (eval.zero_mask[i]) continue;
        const double a = std::abs(eval.values[i]);
        s.min_abs = std::min(s.min_abs, a);
        k.add(std::log(a));
    }
    s.sum = k.sum;
    s.carry = k.carry;
    return s;
}

std::string spec_string(const GridSpec& spec)
{
    std::string s;
    for (std::size_t j = 0; j < spec.dim(); ++j) s += (j ? "x" : "") + std::to_string(spec.orders[j]);
    return s;
}

} // namespace

RiemannSumResult riemann_mahler(const GridEvaluation& eval, const GridOptions& opts)
{
    const std::size_t total = eval.values.size();
    if (eval.certified_zeros == total)
        throw InputError("f vanishes on every point of the grid " + spec_string(eval.spec) + "; m_K is undefined");
    const std::size_t slab = std::max<std::size_t>(1, opts.slab_points);
    const std::size_t slabs = (total + slab - 1) / slab;
    std::vector<SlabSum> partial(slabs);

    const unsigned threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(slabs)));
    if (threads == 1) {
        for (std::size_t s = 0; s < slabs; ++s) partial[s] = sum_slab(eval, s * slab, std::min(total, (s + 1) * slab));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t s = next++; s < slabs; s = next++)
                    partial[s] = sum_slab(eval, s * slab, std::min(total, (s + 1) * slab));
            });
        for (auto& th : pool) th.join();
    }

    // Slabs combine in index order, so the result depends on slab_points only.
    Kahan k;
    double min_abs = std::numeric_limits<double>::infinity();
    for (const auto& p : partial) {
        k.add(p.sum);
        k.add(-p.carry);
        min_abs = std::min(min_abs, p.min_abs);
    }
    RiemannSumResult r;
    r.spec = eval.spec;
    r.log_abs_sum = k.sum;
    r.value = k.sum / static_cast<double>(total);
    r.excluded_points = eval.certified_zeros;
    r.precision_excluded = eval.precision_zeros;
    r.min_abs_nonzero = min_abs;
    r.slab_points = slab;
    return r;
}

RiemannSumResult riemann_mahler(const LaurentPoly& f, const GridSpec& spec, const GridOptions& opts)
{
    if (f.is_zero()) throw InputError("m_K of the zero polynomial is undefined");
    return riemann_mahler(grid_eval(f, spec, opts), opts);
}

std::vector<GridSpec> square_schedule(const LaurentPoly& f, std::size_t first, std::size_t last, std::size_t step,
                                      bool avoid_torsion)
{
    if (first == 0 || step == 0 || last < first) throw InputError("schedule needs 1 <= first <= last and step >= 1");
    std::uint64_t torsion = 1;
    if (avoid_torsion) {
        for (std::size_t n = 1; n <= 12; ++n) {
            const auto spec = GridSpec::square(n, f.dim());
            const auto eval = grid_eval(f, spec);
            for (std::size_t i = 0; i < eval.zero_mask.size(); ++i)
                if (eval.zero_mask[i]) torsion = std::lcm(torsion, point_order(spec, spec.unflatten(i)));
        }
    }
    std::vector<GridSpec> out;
    for (std::size_t n = first; n <= last; n += step)
        if (std::gcd<std::uint64_t>(n, torsion) == 1) out.push_back(GridSpec::square(n, f.dim()));
    if (out.empty()) throw InputError("schedule is empty after removing torsion orders");
    return out;
}

ConvergenceTrace mahler_nd(const LaurentPoly& f, const std::vector<GridSpec>& schedule, double tolerance,
                           std::optional<double> target, const GridOptions& opts)
{
    if (schedule.empty()) throw InputError("empty grid schedule");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i].size() <= schedule[i - 1].size()) throw InputError("schedule grids must strictly grow in size");
    ConvergenceTrace trace{{}, target, tolerance, false, ""};
    for (const auto& spec : schedule) {
        const auto r = riemann_mahler(f, spec, opts);
        TraceEntry e{spec, r.value, r.excluded_points, std::nullopt};
        if (!trace.entries.empty()) e.delta = r.value - trace.entries.back().value;
        trace.entries.push_back(e);
    }
    const auto& last = trace.entries.back();
    if (!last.delta) {
        trace.stopping_reason = "single grid: no difference available";
    } else if (std::abs(*last.delta) <= tolerance) {
        trace.within_tolerance = true;
        trace.stopping_reason = "schedule exhausted; last difference within tolerance";
    } else {
        trace.stopping_reason = "schedule exhausted; last difference exceeds tolerance (non-convergence flag)";
    }
    return trace;
}

std::string to_csv(const ConvergenceTrace& trace)
{
    std::ostringstream os;
    os.precision(17);
    os << "n,value,delta\n";
    for (const auto& e : trace.entries) {
        os << e.spec.orders.front() << ',' << e.value << ',';
        if (e.delta) os << *e.delta;
        os << '\n';
    }
    return os.str();
}

std::vector<ProbeHit> unitary_variety_probe(const LaurentPoly& f, const GridSpec& spec, double threshold,
                                            const GridOptions& opts)
{
    if (!(threshold > 0.0)) throw InputError("probe threshold must be positive");
    const auto eval = grid_eval(f, spec, opts);
    std::vector<ProbeHit> hits;
    for (std::size_t i = 0; i < eval.values.size(); ++i) {
        const double a = std::abs(eval.values[i]);
        // Points outside the mask lie above the certified FFT bound or were decided exactly.
        if (a <= threshold || eval.zero_mask[i]) hits.push_back({spec.unflatten(i), a, eval.zero_mask[i] != 0});
    }
    return hits;
}

double lawton_slice(const LaurentPoly& f, std::int64_t n)
{
    if (f.dim() != 2) throw InputError("Lawton slices need a two-variable polynomial");
    LaurentPoly g(1, f.ring());
    for (const auto& [e, c] : f.terms()) g.add_term({e[0] + n * e[1]}, c);
    if (g.is_zero()) throw InputError("f(u, u^" + std::to_string(n) + ") vanishes identically");
    return mahler_1d(IntPoly::from_laurent(g)).value;
}

nlohmann::json to_json(const RiemannSumResult& r)
{
    return {{"spec", r.spec.orders},
            {"value", r.value},
            {"excluded", r.excluded_points},
            {"precision_excluded", r.precision_excluded},
            {"min_abs_nonzero", r.min_abs_nonzero},
            {"slab_points", r.slab_points}};
}

nlohmann::json to_json(const ConvergenceTrace& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : t.entries) {
        nlohmann::json row{{"spec", e.spec.orders}, {"value", e.value}, {"excluded", e.excluded}};
        row["delta"] = e.delta ? nlohmann::json(*e.delta) : nlohmann::json(nullptr);
        rows.push_back(row);
    }
    nlohmann::json j{{"trace", rows},
                     {"final", t.entries.back().value},
                     {"tolerance", t.tolerance},
                     {"within_tolerance", t.within_tolerance},
                     {"stopping_reason", t.stopping_reason}};
    j["target"] = t.target ? nlohmann::json(*t.target) : nlohmann::json(nullptr);
    return j;
}

} // namespace algdyn
