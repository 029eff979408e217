#include "moebiuslab/taylor.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace moebiuslab {

namespace {

constexpr std::uint64_t kKeyBase = kMaxTaylorOrder + 1;

std::uint64_t encode(std::span<const int> exps) {
    std::uint64_t key = 0;
    for (auto it = exps.rbegin(); it != exps.rend(); ++it) key = key * kKeyBase + static_cast<std::uint64_t>(*it);
    return key;
}

void enumerate(int nvars, int var, int remaining, std::vector<int>& cur, std::vector<int>& out) {
    if (var == nvars - 1) {
        cur[static_cast<std::size_t>(var)] = remaining;
        out.insert(out.end(), cur.begin(), cur.end());
        return;
    }
    for (int e = remaining; e >= 0; --e) {
        cur[static_cast<std::size_t>(var)] = e;
        enumerate(nvars, var + 1, remaining - e, cur, out);
    }
}

constexpr std::array<double, kMaxTaylorOrder + 1> kFactorial = {1, 1, 2, 6, 24, 120, 720};

}  // namespace

MonomialBasis::MonomialBasis(int nvars) : nvars_(nvars) {
    if (nvars < 1 || nvars > 9) throw std::invalid_argument("MonomialBasis: unsupported variable count");
    const auto nv = static_cast<std::size_t>(nvars);
    prefix_.assign(kMaxTaylorOrder + 1, 0);
    std::vector<int> cur(nv, 0);
    for (int d = 0; d <= kMaxTaylorOrder; ++d) {
        enumerate(nvars, 0, d, cur, exps_);
        prefix_[static_cast<std::size_t>(d)] = exps_.size() / nv;
    }
    const std::size_t count = exps_.size() / nv;
    degree_.resize(count);
    keys_.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        auto e = exponents(i);
        int d = 0;
        for (int v : e) d += v;
        degree_[i] = d;
        keys_[i] = encode(e);
    }
    key_order_.resize(count);
    for (std::size_t i = 0; i < count; ++i) key_order_[i] = static_cast<std::uint32_t>(i);
    std::sort(key_order_.begin(), key_order_.end(), [&](auto a, auto b) { return keys_[a] < keys_[b]; });

    std::vector<int> sum(nv);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < prefix_[static_cast<std::size_t>(kMaxTaylorOrder - degree_[i])]; ++j) {
            auto a = exponents(i);
            auto b = exponents(j);
            for (std::size_t v = 0; v < nv; ++v) sum[v] = a[v] + b[v];
            products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                                 static_cast<std::uint32_t>(index(sum))});
        }
    }
    std::stable_sort(products_.begin(), products_.end(),
                     [&](const Product& a, const Product& b) { return degree_[a.out] < degree_[b.out]; });
    product_prefix_.assign(kMaxTaylorOrder + 1, 0);
    for (const auto& p : products_) {
        for (int d = degree_[p.out]; d <= kMaxTaylorOrder; ++d) ++product_prefix_[static_cast<std::size_t>(d)];
    }

    deriv_.resize(nv);
    deriv_prefix_.assign(nv, std::vector<std::size_t>(kMaxTaylorOrder + 1, 0));
    for (std::size_t v = 0; v < nv; ++v) {
        for (std::size_t i = 0; i < count; ++i) {
            auto e = exponents(i);
            if (e[v] == 0) continue;
            std::vector<int> lowered(e.begin(), e.end());
            lowered[v] -= 1;
            deriv_[v].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(index(lowered)),
                                 static_cast<double>(e[v])});
        }
        for (const auto& t : deriv_[v]) {
            for (int d = degree_[t.src]; d <= kMaxTaylorOrder; ++d) ++deriv_prefix_[v][static_cast<std::size_t>(d)];
        }
    }
}

const MonomialBasis& MonomialBasis::get(int nvars) {
    thread_local std::map<int, const MonomialBasis*> local;
    if (const auto it = local.find(nvars); it != local.end()) return *it->second;
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<MonomialBasis>> registry;
    std::lock_guard lock(mutex);
    auto& slot = registry[nvars];
    if (!slot) slot.reset(new MonomialBasis(nvars));
    local[nvars] = slot.get();
    return *slot;
}

std::size_t MonomialBasis::index(std::span<const int> exps) const {
    const auto key = encode(exps);
    auto it = std::lower_bound(key_order_.begin(), key_order_.end(), key,
                               [&](std::uint32_t idx, std::uint64_t k) { return keys_[idx] < k; });
    if (it == key_order_.end() || keys_[*it] != key) throw std::out_of_range("MonomialBasis: monomial degree too high");
    return *it;
}

std::span<const MonomialBasis::DerivativeTerm> MonomialBasis::derivative_terms(int var, int order) const {
    const auto v = static_cast<std::size_t>(var);
    return {deriv_[v].data(), deriv_prefix_[v][static_cast<std::size_t>(order)]};
}

Taylor::Taylor(const MonomialBasis* basis, int order)
    : basis_(basis), order_(order), coeffs_(basis->size(order), 0.0) {}

Taylor Taylor::constant(int nvars, int order, double v) {
    Taylor t(&MonomialBasis::get(nvars), order);
    t.coeffs_[0] = v;
    return t;
}

Taylor Taylor::variable(int nvars, int order, int var, double v) {
    Taylor t = constant(nvars, order, v);
    if (order >= 1) t.coeffs_[1 + static_cast<std::size_t>(var)] = 1.0;
    return t;
}

double Taylor::coefficient(std::span<const int> exps) const {
    int d = 0;
    for (int e : exps) d += e;
    if (!basis_) return d == 0 ? coeffs_[0] : 0.0;
    if (d > order_) throw std::out_of_range("Taylor::coefficient beyond truncation order");
    return coeffs_[basis_->index(exps)];
}

double Taylor::partial(std::span<const int> exps) const {
    double scale = 1.0;
    for (int e : exps) scale *= kFactorial[static_cast<std::size_t>(e)];
    return scale * coefficient(exps);
}

Taylor Taylor::derivative(int var) const {
    if (!basis_) return Taylor(0.0);
    if (order_ < 1) throw std::logic_error("Taylor::derivative of an order-0 expansion");
    Taylor r(basis_, order_ - 1);
    for (const auto& t : basis_->derivative_terms(var, order_)) r.coeffs_[t.dst] += t.factor * coeffs_[t.src];
    return r;
}

Taylor Taylor::truncated(int order) const {
    if (!basis_ || order >= order_) return *this;
    Taylor r(basis_, order);
    std::copy_n(coeffs_.begin(), r.coeffs_.size(), r.coeffs_.begin());
    return r;
}

Taylor Taylor::with_value(double v) const {
    Taylor r = *this;
    r.coeffs_[0] = v;
    return r;
}

Taylor& Taylor::operator+=(const Taylor& o) {
    if (!o.basis_) return *this += o.coeffs_[0];
    if (!basis_) {
        const double v = coeffs_[0];
        *this = o;
        return *this += v;
    }
    assert(basis_ == o.basis_);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
    if (!o.basis_) return *this -= o.coeffs_[0];
    if (!basis_) {
        const double v = coeffs_[0];
        *this = -o;
        return *this += v;
    }
    assert(basis_ == o.basis_);
    if (o.order_ < order_) *this = truncated(o.order_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

Taylor& Taylor::operator*=(double v) {
    for (auto& c : coeffs_) c *= v;
    return *this;
}

Taylor& Taylor::operator*=(const Taylor& o) { return *this = *this * o; }

Taylor& Taylor::operator/=(const Taylor& o) {
    if (!o.basis_) return *this *= (1.0 / o.coeffs_[0]);
    return *this = *this * reciprocal(o);
}

Taylor Taylor::operator-() const {
    Taylor r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
}

Taylor operator*(const Taylor& a, const Taylor& b) {
    if (!a.basis_) return b * a.coeffs_[0];
    if (!b.basis_) return a * b.coeffs_[0];
    assert(a.basis_ == b.basis_);
    Taylor r(a.basis_, std::min(a.order_, b.order_));
    const double* x = a.coeffs_.data();
    const double* y = b.coeffs_.data();
    double* z = r.coeffs_.data();
    for (const auto& p : a.basis_->products(r.order_)) z[p.out] += x[p.lhs] * y[p.rhs];
    return r;
}

Taylor operator/(double a, const Taylor& b) { return reciprocal(b) *= a; }

Taylor Taylor::compose(std::span<const double> derivs) const {
    if (!basis_) return Taylor(derivs[0]);
    const int k = order_;
    Taylor h = *this;
    h.coeffs_[0] = 0.0;
    Taylor r = Taylor::constant(nvars(), k, derivs[static_cast<std::size_t>(k)] / kFactorial[static_cast<std::size_t>(k)]);
    for (int i = k - 1; i >= 0; --i) {
        r = r * h;
        r.coeffs_[0] += derivs[static_cast<std::size_t>(i)] / kFactorial[static_cast<std::size_t>(i)];
    }
    return r;
}

namespace {

using Derivs = std::array<double, kMaxTaylorOrder + 1>;

}  // namespace

Taylor reciprocal(const Taylor& x) {
    const double a = x.value();
    Derivs d{};
    double p = 1.0 / a;
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = ((k % 2) ? -1.0 : 1.0) * kFactorial[k] * p;
        p /= a;
    }
    return x.compose(d);
}

Taylor exp(const Taylor& x) {
    Derivs d;
    d.fill(std::exp(x.value()));
    return x.compose(d);
}

Taylor log(const Taylor& x) {
    const double a = x.value();
    Derivs d{};
    d[0] = std::log(a);
    double p = 1.0 / a;
    for (std::size_t k = 1; k < d.size(); ++k) {
        d[k] = ((k % 2) ? 1.0 : -1.0) * kFactorial[k - 1] * p;
        p /= a;
    }
    return x.compose(d);
}

Taylor sin(const Taylor& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const std::array<double, 4> cycle = {s, c, -s, -c};
    Derivs d{};
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = cycle[k % 4];
    return x.compose(d);
}

Taylor cos(const Taylor& x) {
    const double s = std::sin(x.value()), c = std::cos(x.value());
    const std::array<double, 4> cycle = {c, -s, -c, s};
    Derivs d{};
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = cycle[k % 4];
    return x.compose(d);
}

Taylor sinh(const Taylor& x) {
    const double s = std::sinh(x.value()), c = std::cosh(x.value());
    Derivs d{};
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (k % 2) ? c : s;
    return x.compose(d);
}

Taylor cosh(const Taylor& x) {
    const double s = std::sinh(x.value()), c = std::cosh(x.value());
    Derivs d{};
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = (k % 2) ? s : c;
    return x.compose(d);
}

Taylor pow(const Taylor& x, double p) {
    const double a = x.value();
    Derivs d{};
    double falling = 1.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
        d[k] = falling * std::pow(a, p - static_cast<double>(k));
        falling *= p - static_cast<double>(k);
    }
    return x.compose(d);
}

Taylor sqrt(const Taylor& x) { return pow(x, 0.5); }

Taylor atan(const Taylor& x) {
    // atan' = 1/(1+t^2); expand that in one variable to get the higher derivatives.
    const double a = x.value();
    const Taylor t = Taylor::variable(1, kMaxTaylorOrder - 1, 0, a);
    const Taylor r = reciprocal(1.0 + t * t);
    Derivs d{};
    d[0] = std::atan(a);
    for (int k = 0; k < kMaxTaylorOrder; ++k) {
        const std::array<int, 1> e = {k};
        d[static_cast<std::size_t>(k) + 1] = r.partial(e);
    }
    return x.compose(d);
}

Taylor square(const Taylor& x) { return x * x; }

Taylor dot(std::span<const Taylor> a, std::span<const Taylor> b) {
    Taylor s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace moebiuslab
