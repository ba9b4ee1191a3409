#include "pmt/holder.hpp"

#include "pmt/keyvalue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

namespace pmt {

namespace {

unsigned worker_count(std::size_t work)
{
    if (work < 200000) return 1;
    return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

// Deterministic parallel max: worker w handles items w, w + W, w + 2W, ...
template <class Body>
double parallel_max(std::size_t items, std::size_t work_estimate, Body body)
{
    const unsigned workers = worker_count(work_estimate);
    if (workers == 1) {
        double m = 0.0;
        for (std::size_t a = 0; a < items; ++a) m = std::max(m, body(a));
        return m;
    }
    std::vector<double> partial(workers, 0.0);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            double m = 0.0;
            for (std::size_t a = w; a < items; a += workers) m = std::max(m, body(a));
            partial[w] = m;
        });
    }
    for (auto& th : pool) th.join();
    return *std::max_element(partial.begin(), partial.end());
}

double quotient(double df, double dist, double beta)
{
    if (df == 0.0 || dist == 0.0) return 0.0;
    return beta == 1.0 ? df / dist : df / std::pow(dist, beta);
}

struct NodeData {
    std::vector<double> t, x, f;
};

NodeData gather(const ScalarField& field, const std::vector<std::size_t>& idx)
{
    const auto& g = field.grid();
    NodeData d;
    d.t.reserve(idx.size());
    d.x.reserve(idx.size());
    d.f.reserve(idx.size());
    for (auto k : idx) {
        d.t.push_back(g.t(k / g.nx()));
        d.x.push_back(g.x(k % g.nx()));
        d.f.push_back(field.values()[k]);
    }
    return d;
}

double all_pairs_seminorm(const NodeData& d, double beta)
{
    const std::size_t n = d.f.size();
    return parallel_max(n, n * n / 2, [&](std::size_t a) {
        double m = 0.0;
        for (std::size_t b = a + 1; b < n; ++b) {
            const double df = std::abs(d.f[a] - d.f[b]);
            if (df == 0.0) continue;
            const double dist = std::max(std::sqrt(std::abs(d.t[a] - d.t[b])), std::abs(d.x[a] - d.x[b]));
            m = std::max(m, quotient(df, dist, beta));
        }
        return m;
    });
}

} // namespace

std::string HolderReport::render() const
{
    KeyValueConfig c;
    c.set("exponent", exponent);
    c.set("region_nodes", region.count());
    c.set("sup_norm", sup_norm);
    c.set("seminorm", seminorm);
    c.set("norm", norm);
    c.set("pairs_sampled", pairs_sampled);
    c.set("exhaustive", exhaustive ? "true" : "false");
    return c.render();
}

double parabolic_distance(double t, double x, double s, double y)
{
    return std::max(std::sqrt(std::abs(t - s)), std::abs(x - y));
}

HolderReport holder_seminorm(const ScalarField& f, double beta, const RegionMask& region, const HolderOptions& opts)
{
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("holder_seminorm: exponent must lie in (0, 1]");
    if (!(f.grid() == region.grid())) throw std::invalid_argument("holder_seminorm: region lives on another grid");
    const auto idx = region.nodes();
    if (idx.empty()) throw std::invalid_argument("holder_seminorm: empty region");

    HolderReport rep{beta, region};
    for (auto k : idx) rep.sup_norm = std::max(rep.sup_norm, std::abs(f.values()[k]));

    const std::size_t n = idx.size();
    if (n <= opts.exhaustive_limit) {
        rep.seminorm = all_pairs_seminorm(gather(f, idx), beta);
        rep.pairs_sampled = n * (n - 1) / 2;
        rep.exhaustive = true;
    } else {
        rep.exhaustive = false;
        std::vector<std::size_t> sample;
        const std::size_t want = std::min(opts.sample_nodes, n);
        sample.reserve(want);
        std::mt19937_64 rng(opts.seed);
        std::sample(idx.begin(), idx.end(), std::back_inserter(sample), want, rng);
        rep.seminorm = all_pairs_seminorm(gather(f, sample), beta);
        rep.pairs_sampled = want * (want - 1) / 2;

        if (opts.local_pairs) {
            const auto& g = f.grid();
            const std::size_t nt = g.nt(), nx = g.nx();
            const int ws = opts.local_space_window, wt = opts.local_time_window;
            std::vector<std::size_t> counts(nt, 0);
            const double local = parallel_max(nt, g.size() * static_cast<std::size_t>(ws + wt + 2), [&](std::size_t tn) {
                double m = 0.0;
                std::size_t c = 0;
                auto visit = [&](std::size_t i, std::size_t n2, std::size_t j) {
                    if (n2 >= nt || j >= nx || !region.contains(n2, j)) return;
                    ++c;
                    const double df = std::abs(f(tn, i) - f(n2, j));
                    m = std::max(m, quotient(df, parabolic_distance(g.t(tn), g.x(i), g.t(n2), g.x(j)), beta));
                };
                for (std::size_t i = 0; i < nx; ++i) {
                    if (!region.contains(tn, i)) continue;
                    for (int di = 1; di <= ws; ++di) visit(i, tn, i + static_cast<std::size_t>(di));
                    for (int dn = 1; dn <= wt; ++dn) visit(i, tn + static_cast<std::size_t>(dn), i);
                    visit(i, tn + 1, i + 1);
                    if (i > 0) visit(i, tn + 1, i - 1);
                }
                counts[tn] = c;
                return m;
            });
            rep.seminorm = std::max(rep.seminorm, local);
            for (auto c : counts) rep.pairs_sampled += c;
        }
    }
    rep.norm = rep.sup_norm + rep.seminorm;
    return rep;
}

ClassicalNormTerms parabolic_norm_2plus_terms(const ScalarField& f, double alpha, const RegionMask& region,
                                              const HolderOptions& opts)
{
    if (!(f.grid() == region.grid())) throw std::invalid_argument("parabolic_norm_2plus: region lives on another grid");
    const auto& g = f.grid();
    std::set<std::size_t> layers, columns;
    for (auto k : region.nodes()) {
        layers.insert(k / g.nx());
        columns.insert(k % g.nx());
    }
    if (layers.size() < 4 || columns.size() < 4)
        throw std::invalid_argument("parabolic_norm_2plus: region too thin for the stencils");

    const auto dtf = discrete_time_derivative(f);
    const auto grad = discrete_gradient(f);
    const auto lap = discrete_laplacian(f);

    ClassicalNormTerms terms;
    for (auto k : region.nodes()) {
        terms.sup_f = std::max(terms.sup_f, std::abs(f.values()[k]));
        terms.sup_grad = std::max(terms.sup_grad, std::abs(grad.values()[k]));
        terms.sup_lap = std::max(terms.sup_lap, std::abs(lap.values()[k]));
        terms.sup_dt = std::max(terms.sup_dt, std::abs(dtf.values()[k]));
    }
    terms.semi_dt = holder_seminorm(dtf, alpha, region, opts).seminorm;
    terms.semi_lap = holder_seminorm(lap, alpha, region, opts).seminorm;
    return terms;
}

double parabolic_norm_2plus(const ScalarField& f, double alpha, const RegionMask& region, const HolderOptions& opts)
{
    return parabolic_norm_2plus_terms(f, alpha, region, opts).total();
}

double holder_norm_1d(const ScalarFn& g, double lo, double hi, double beta, int samples)
{
    if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("holder_norm_1d: exponent must lie in (0, 1]");
    if (hi < lo) throw std::invalid_argument("holder_norm_1d: empty interval");
    if (hi == lo) return std::abs(g(lo));
    samples = std::max(samples, 2);
    std::vector<double> xs(samples), vs(samples);
    double sup = 0.0;
    for (int j = 0; j < samples; ++j) {
        xs[j] = lo + (hi - lo) * j / (samples - 1);
        vs[j] = g(xs[j]);
        sup = std::max(sup, std::abs(vs[j]));
    }
    double semi = 0.0;
    for (int a = 0; a < samples; ++a)
        for (int b = a + 1; b < samples; ++b)
            semi = std::max(semi, quotient(std::abs(vs[a] - vs[b]), xs[b] - xs[a], beta));
    return sup + semi;
}

namespace {

// ||w||_{C^{2+alpha}} of one spatial layer restricted to the nodes in `in`.
double layer_classical_norm(const SpaceTimeGrid& g, std::span<const double> w, const std::vector<char>& in, double alpha)
{
    const std::size_t nx = g.nx();
    const double h = g.h();
    std::vector<double> d1(nx, 0.0), d2(nx, 0.0);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        d1[i] = (w[i + 1] - w[i - 1]) / (2.0 * h);
        d2[i] = (w[i + 1] - 2.0 * w[i] + w[i - 1]) / (h * h);
    }
    double s0 = 0, s1 = 0, s2 = 0, semi = 0;
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        if (!in[i]) continue;
        s0 = std::max(s0, std::abs(w[i]));
        s1 = std::max(s1, std::abs(d1[i]));
        s2 = std::max(s2, std::abs(d2[i]));
        for (std::size_t j = i + 1; j + 1 < nx; ++j)
            if (in[j]) semi = std::max(semi, quotient(std::abs(d2[i] - d2[j]), g.x(j) - g.x(i), alpha));
    }
    return s0 + s1 + s2 + semi;
}

// ||w||_{C^{(1+alpha/2, 2+alpha)}} of a boundary trace, a function of time only.
double trace_norm(const ScalarField& u, std::size_t column, double k, int side, double alpha)
{
    const auto& g = u.grid();
    const std::size_t nt = g.nt();
    std::vector<double> w(nt), dw(nt);
    for (std::size_t n = 0; n < nt; ++n) w[n] = u(n, column);
    for (std::size_t n = 1; n + 1 < nt; ++n) dw[n] = (w[n + 1] - w[n - 1]) / (2.0 * g.dt());
    dw[0] = (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * g.dt());
    dw[nt - 1] = (3.0 * w[nt - 1] - 4.0 * w[nt - 2] + w[nt - 3]) / (2.0 * g.dt());
    auto inside = [&](std::size_t n) { return side > 0 ? w[n] >= k : w[n] <= -k; };
    double s0 = 0, s1 = 0, semi = 0;
    for (std::size_t a = 0; a < nt; ++a) {
        if (!inside(a)) continue;
        s0 = std::max(s0, std::abs(w[a]));
        s1 = std::max(s1, std::abs(dw[a]));
        for (std::size_t b = a + 1; b < nt; ++b)
            if (inside(b))
                semi = std::max(semi, quotient(std::abs(dw[a] - dw[b]), std::sqrt(g.t(b) - g.t(a)), alpha));
    }
    return s0 + s1 + semi;
}

} // namespace

std::string PsiProfile::render_csv() const
{
    std::string out = "k,psi_plus,psi_minus\n";
    for (std::size_t j = 0; j < k.size(); ++j)
        out += format_double(k[j]) + "," + format_double(psi_plus[j]) + "," + format_double(psi_minus[j]) + "\n";
    return out;
}

PsiProfile psi_profile(const ScalarField& u, const CoefficientFunction& coeff, const PsiExponents& exps,
                       const std::vector<double>& thresholds, bool include_traces, const HolderOptions& opts)
{
    const double umax = u.max_abs();
    for (double k : thresholds)
        if (!(k > 0.0 && k <= umax))
            throw std::invalid_argument("psi_profile: threshold " + format_double(k) + " outside (0, max|u| = " +
                                        format_double(umax) + "]");

    const auto& g = u.grid();
    ScalarFn a = [&coeff](double x) { return coeff.a(x); };
    ScalarFn f = [&coeff](double x) { return coeff.f(x); };

    PsiProfile prof;
    for (double k : thresholds) {
        double sides[2] = {0.0, 0.0};
        for (int s = 0; s < 2; ++s) {
            const int sign = s == 0 ? 1 : -1;
            const double lo = sign > 0 ? k : -umax;
            const double hi = sign > 0 ? umax : -k;
            double psi = std::max(holder_norm_1d(a, lo, hi, exps.alpha_a), holder_norm_1d(f, lo, hi, exps.alpha_f));
            const auto region = superlevel_mask(u, k, sign > 0 ? LevelSide::AtLeast : LevelSide::AtMostNegative);
            double hu = 0.0;
            if (!region.empty()) hu = holder_seminorm(u, exps.alpha_u, region, opts).norm;
            psi = std::max(psi, hu);
            if (include_traces) {
                std::vector<char> in0(g.nx());
                const auto layer0 = u.layer(0);
                for (std::size_t i = 0; i < g.nx(); ++i) in0[i] = (sign > 0 ? layer0[i] >= k : layer0[i] <= -k) ? 1 : 0;
                psi = std::max(psi, layer_classical_norm(g, layer0, in0, exps.alpha));
                psi = std::max(psi, trace_norm(u, g.nx() - 1, k, sign, exps.alpha));
                if (!g.radial()) psi = std::max(psi, trace_norm(u, 0, k, sign, exps.alpha));
            }
            sides[s] = psi;
            if (sign > 0) {
                prof.holder_u.push_back(hu);
                double classical = std::numeric_limits<double>::quiet_NaN();
                try {
                    classical = parabolic_norm_2plus(u, exps.alpha, region, opts);
                } catch (const std::invalid_argument&) {
                }
                prof.norm_2plus.push_back(classical);
            }
        }
        prof.k.push_back(k);
        prof.psi_plus.push_back(sides[0]);
        prof.psi_minus.push_back(sides[1]);
    }
    return prof;
}

} // namespace pmt
