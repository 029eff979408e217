#include "moebiuslab/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "moebiuslab/errors.hpp"
#include "moebiuslab/invariants.hpp"

namespace moebiuslab {

void validate(const SampleConfig& cfg) {
    if (cfg.point_count < 8)
        throw Error(ErrorCode::InsufficientSamples, "need at least 8 sample points, got " + std::to_string(cfg.point_count));
    if (!(cfg.tol_cluster > 0.0) || !(cfg.tol_verdict > 0.0) || !(cfg.tol_constancy > 0.0))
        throw Error(ErrorCode::ParamOutOfRange, "tolerances must be positive");
    if (!(cfg.inset >= 0.0 && cfg.inset < 0.5)) throw Error(ErrorCode::ParamOutOfRange, "inset must lie in [0, 0.5)");
}

int worker_count(std::size_t tasks) {
    long cap = 0;
    if (const char* env = std::getenv("MOEBIUSLAB_THREADS")) cap = std::strtol(env, nullptr, 10);
    if (cap <= 0) cap = static_cast<long>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(std::clamp<long>(cap, 1, static_cast<long>(std::max<std::size_t>(tasks, 1))));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(count);
    auto run = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

PointSample sample_point(const ImmersionSpec& spec, const Eigen::VectorXd& x, const SampleConfig& cfg, bool with_warped) {
    PointSample ps;
    ps.x = x;
    const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
    try {
        const MoebiusData md = evaluate_moebius(spec, xs);
        ps.lambda_bar = md.lambda_bar;
        ps.theta = md.theta;
        ps.s_star = md.s_star;
        ps.residuals = md.residuals;
        ps.omega_norm = (md.frame.transpose() * md.omega).norm();
        ps.spectrum = cluster_spectrum(md.lambda_bar, md.theta, cfg.tol_cluster);
        ps.direct = semiparallel_direct(md);
        ps.spectral = semiparallel_spectral(ps.spectrum);
        if (with_warped)
            for (const auto& w : check_warped_product(spec, xs, md, ps.spectrum, cfg.tol_cluster))
                ps.warped = std::max(ps.warped, w.residual);
    } catch (const std::exception& e) {
        ps.error = e.what();
    }
    return ps;
}

std::vector<Spread> constancy_table(const std::vector<std::pair<std::string, std::vector<double>>>& series, double tol) {
    std::vector<Spread> out;
    for (const auto& [name, values] : series) {
        Spread s;
        s.quantity = name;
        if (!values.empty()) {
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            s.min = *lo;
            s.max = *hi;
            s.spread = *hi - *lo;
        }
        s.constant = s.spread < tol;
        out.push_back(s);
    }
    return out;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

Verdict route(double residual, double tol) {
    if (residual < tol) return Verdict::SemiParallel;
    if (residual > 10.0 * tol) return Verdict::NotSemiParallel;
    return Verdict::Indeterminate;
}

int sign_of(double v, double tol) { return v < -tol ? -1 : (v > tol ? 1 : 0); }

std::string metadata_branch(const ClassificationReport& rep) {
    const auto it = rep.metadata.find("branch");
    return it == rep.metadata.end() ? std::string{} : it->second;
}

bool spread_constant(const std::vector<Spread>& table, const std::string& prefix) {
    return std::all_of(table.begin(), table.end(),
                       [&](const Spread& s) { return s.quantity.rfind(prefix, 0) != 0 || s.constant; });
}

void decide_two(ClassificationReport& rep) {
    rep.notes.push_back("two clusters: the pairwise identity λ̄ᵢλ̄ⱼ+θᵢ+θⱼ = 0 is applied to the single cluster pair");
    const double tol = rep.config.tol_constancy;
    const bool constant = spread_constant(rep.constancy, "kappa") && spread_constant(rep.constancy, "s_star");
    const std::string meta = metadata_branch(rep);
    if (!constant) {
        std::ostringstream os;
        os.precision(3);
        os << "λ̄²+2θ varies across points; max |ω|* = " << rep.omega_max;
        rep.notes.push_back(os.str());
        if (meta == branch::kTwoCurvIV || meta == branch::kTwoCurvV) {
            rep.branch = meta;
            rep.notes.push_back("curve-type; sub-branch taken from catalog metadata");
        } else {
            rep.branch = branch::kTwoCurvCurve;
            rep.notes.push_back("curve-type, not sub-resolved");
        }
        return;
    }
    int negative = 0, zero = 0, positive = 0, big = 0;
    for (const auto& c : rep.clusters) {
        if (c.multiplicity < 2) continue;
        ++big;
        switch (sign_of(c.invariant, tol)) {
            case -1: ++negative; break;
            case 0: ++zero; break;
            default: ++positive; break;
        }
    }
    if (negative > 0) {
        rep.branch = branch::kTwoCurvII;
    } else if (zero > 0) {
        rep.branch = branch::kTwoCurvI;
    } else if (big == 2) {
        rep.branch = branch::kTwoCurvIII;
    } else if (meta == branch::kTwoCurvI || meta == branch::kTwoCurvII || meta == branch::kTwoCurvIII) {
        rep.branch = meta;
        rep.notes.push_back("one factor is one-dimensional, so its curvature sign is undefined; sub-branch taken from catalog metadata");
    } else {
        rep.branch = branch::kTwoCurvIII;
        rep.notes.push_back("one factor is one-dimensional, so its curvature sign is undefined; (i)-(iii) not separated");
    }
}

void decide_three(ClassificationReport& rep) {
    const double tol = rep.config.tol_constancy;
    int big = 0;
    const ClusterSummary* largest = &rep.clusters.front();
    for (const auto& c : rep.clusters) {
        if (c.multiplicity >= 2) ++big;
        if (c.multiplicity > largest->multiplicity) largest = &c;
    }
    const bool kappas = spread_constant(rep.constancy, "kappa");
    const bool s_star = spread_constant(rep.constancy, "s_star");
    const bool lambdas = spread_constant(rep.constancy, "lambda_bar");
    if (big >= 2) {
        if (s_star && lambdas) {
            rep.branch = branch::kMoebiusParallel;
        } else {
            rep.branch = branch::kIndeterminate;
            rep.diagnostic = "three clusters with two multiplicities ≥ 2 but s* or λ̄ not constant";
        }
        return;
    }
    if (!(kappas && s_star && lambdas)) {
        rep.branch = branch::kIndeterminate;
        rep.diagnostic = "three clusters with multiplicities (1,1,m) but non-constant invariants";
        return;
    }
    if (rep.n == 3) {
        rep.branch = branch::kConeClifford;
        rep.notes.push_back("n = 3: cone over a homogeneous torus; this case is treated separately from n ≥ 4");
        return;
    }
    std::ostringstream os;
    os.precision(17);
    os << "λ̄²+2θ on the multiplicity-" << largest->multiplicity << " cluster: " << largest->invariant;
    rep.notes.push_back(os.str());
    switch (sign_of(largest->invariant, tol)) {
        case -1: rep.branch = branch::kConeClifford; break;
        case 1: rep.branch = branch::kRotHypCylinder; break;
        default:
            rep.branch = branch::kIndeterminate;
            rep.diagnostic = "λ̄²+2θ vanishes on the multiplicity-(n−2) cluster";
    }
}

}  // namespace

ClassificationReport classify(const ImmersionSpec& spec, const SampleConfig& cfg) {
    validate(cfg);
    ClassificationReport rep;
    rep.spec_name = spec.name;
    rep.metadata = spec.metadata;
    rep.n = spec.n;
    rep.config = cfg;

    const auto points = sample_points(spec.domain, cfg.point_count, cfg.seed, cfg.inset);
    std::vector<PointSample> samples(points.size());
    parallel_for(points.size(), [&](std::size_t i) { samples[i] = sample_point(spec, points[i], cfg, false); });

    std::vector<const PointSample*> good;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].error.empty())
            good.push_back(&samples[i]);
        else
            rep.point_errors.push_back("point " + std::to_string(i) + ": " + samples[i].error);
    }
    rep.points_evaluated = static_cast<int>(good.size());

    auto collect = [&](auto&& get) {
        std::vector<double> v;
        v.reserve(good.size());
        for (const auto* p : good) v.push_back(get(*p));
        return v;
    };
    auto stats = [&](const char* name, auto&& get) {
        const auto v = collect(get);
        rep.residuals.push_back({name, v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()), median(v)});
    };
    stats("trace_B", [](const PointSample& p) { return std::abs(p.residuals.trace_B); });
    stats("norm_B", [](const PointSample& p) { return p.residuals.norm_B; });
    stats("trace_psi", [](const PointSample& p) { return p.residuals.trace_psi; });
    stats("gauss", [](const PointSample& p) { return p.residuals.gauss; });
    stats("codazzi_B", [](const PointSample& p) { return p.residuals.codazzi_B; });
    stats("codazzi_psi", [](const PointSample& p) { return p.residuals.codazzi_psi; });
    stats("ricci", [](const PointSample& p) { return p.residuals.ricci; });
    stats("bianchi", [](const PointSample& p) { return p.residuals.bianchi; });
    stats("semiparallel_direct", [](const PointSample& p) { return p.direct; });
    stats("semiparallel_spectral", [](const PointSample& p) { return p.spectral; });

    if (!rep.point_errors.empty()) {
        rep.branch = branch::kIndeterminate;
        rep.diagnostic = std::to_string(rep.point_errors.size()) + " sample point(s) failed; first: " + rep.point_errors.front();
        return rep;
    }

    // Cross-point matching by position in the ascending spectrum.
    const auto mult = good.front()->spectrum.multiplicities();
    rep.matching_stable = std::all_of(good.begin(), good.end(), [&](const PointSample* p) {
        return p->spectrum.multiplicities() == mult;
    });
    if (!rep.matching_stable) {
        rep.branch = branch::kIndeterminate;
        rep.diagnostic = "cluster multiplicities differ across sample points";
        return rep;
    }
    rep.multiplicities = mult;
    rep.cluster_count = static_cast<int>(mult.size());
    double min_sep = std::numeric_limits<double>::infinity();
    for (const auto* p : good) min_sep = std::min(min_sep, p->spectrum.separation);

    std::vector<std::pair<std::string, std::vector<double>>> series;
    for (std::size_t c = 0; c < mult.size(); ++c) {
        ClusterSummary cs;
        cs.multiplicity = mult[c];
        const auto lam = collect([c](const PointSample& p) { return p.spectrum.clusters[c].lambda; });
        const auto th = collect([c](const PointSample& p) { return p.spectrum.clusters[c].theta; });
        const auto kap = collect([c](const PointSample& p) { return p.spectrum.clusters[c].invariant; });
        const auto mean = [](const std::vector<double>& v) {
            double s = 0.0;
            for (double x : v) s += x;
            return s / static_cast<double>(v.size());
        };
        cs.lambda = mean(lam);
        cs.theta = mean(th);
        cs.invariant = mean(kap);
        rep.clusters.push_back(cs);
        const auto [lo, hi] = std::minmax_element(lam.begin(), lam.end());
        rep.matching_quality = std::max(rep.matching_quality, (*hi - *lo) / min_sep);
        series.emplace_back("lambda_bar[" + std::to_string(c) + "]", lam);
        series.emplace_back("kappa[" + std::to_string(c) + "]", kap);
    }
    series.emplace_back("s_star", collect([](const PointSample& p) { return p.s_star; }));
    rep.constancy = constancy_table(series, cfg.tol_constancy);
    rep.omega_max = 0.0;
    for (const auto* p : good) rep.omega_max = std::max(rep.omega_max, p->omega_norm);

    const double dmax = rep.residuals[8].max;
    const double smax = rep.residuals[9].max;
    rep.verdict = verdict(dmax, smax, cfg.tol_verdict);
    rep.direct_route = route(dmax, cfg.tol_verdict);
    rep.spectral_route = route(smax, cfg.tol_verdict);

    if (rep.verdict.verdict == Verdict::NotSemiParallel) {
        rep.branch = branch::kNotSemiParallel;
    } else if (rep.verdict.verdict == Verdict::Indeterminate) {
        rep.branch = branch::kIndeterminate;
        rep.diagnostic = rep.verdict.diagnostic;
    } else {
        // Warped-product check along eigendirections of repeated clusters.
        std::vector<double> warped(points.size(), 0.0);
        parallel_for(points.size(), [&](std::size_t i) {
            warped[i] = sample_point(spec, points[i], cfg, true).warped;
        });
        rep.warped_max = *std::max_element(warped.begin(), warped.end());
        rep.residuals.push_back({"warped", rep.warped_max, median(warped)});
        if (rep.cluster_count == 2) {
            decide_two(rep);
        } else if (rep.cluster_count == 3) {
            decide_three(rep);
        } else {
            rep.branch = branch::kIndeterminate;
            rep.diagnostic = "semi-parallel with " + std::to_string(rep.cluster_count) + " clusters";
        }
    }
    const std::string meta = metadata_branch(rep);
    if (!meta.empty() && meta != "none" && meta != rep.branch)
        rep.notes.push_back("catalog metadata names branch " + meta);
    return rep;
}

}  // namespace moebiuslab
