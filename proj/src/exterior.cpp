#include "cayley/exterior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace cayley {

namespace {

int popcount(unsigned x) { return std::popcount(x); }

// Number of set bits of m strictly above index i.
int bits_above(Mask m, int i) { return popcount(static_cast<unsigned>(m) >> (i + 1)); }

// Number of set bits of m strictly below index i.
int bits_below(Mask m, int i) { return popcount(static_cast<unsigned>(m) & ((1u << i) - 1u)); }

// Sign of theta^A ^ theta^B relative to theta^{A|B}; A and B disjoint.
double merge_sign(Mask a, Mask b) {
    int inversions = 0;
    for (int j = 0; j < kDim; ++j)
        if (b & (1u << j)) inversions += bits_above(a, j);
    return (inversions % 2 == 0) ? 1.0 : -1.0;
}

// Determinant of a small dense matrix by partial-pivot elimination.
double small_det(std::array<double, kDim * kDim>& a, int n) {
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * kDim + col]) > std::abs(a[piv * kDim + col])) piv = r;
        const double p = a[piv * kDim + col];
        if (p == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[piv * kDim + c], a[col * kDim + c]);
            det = -det;
        }
        det *= p;
        for (int r = col + 1; r < n; ++r) {
            const double f = a[r * kDim + col] / p;
            if (f == 0.0) continue;
            for (int c = col + 1; c < n; ++c) a[r * kDim + c] -= f * a[col * kDim + c];
        }
    }
    return det;
}

}  // namespace

std::vector<int> mask_indices(Mask m) {
    std::vector<int> out;
    for (int i = 0; i < kDim; ++i)
        if (m & (1u << i)) out.push_back(i);
    return out;
}

int mask_degree(Mask m) { return popcount(m); }

const std::vector<Mask>& masks_of_degree(int degree) {
    static const std::array<std::vector<Mask>, kDim + 1> table = [] {
        std::array<std::vector<Mask>, kDim + 1> t;
        for (unsigned m = 0; m < 256; ++m) t[popcount(m)].push_back(static_cast<Mask>(m));
        return t;
    }();
    if (degree < 0 || degree > kDim) throw std::out_of_range("form degree must lie in 0..8");
    return table[degree];
}

// ---------------------------------------------------------------------------
// KForm

KForm::KForm(int degree) : degree_(degree) {
    if (degree < 0 || degree > kDim) throw std::domain_error("degree exceeds 8");
}

KForm KForm::scalar(double value) {
    KForm f(0);
    f.add(0, value);
    return f;
}

KForm KForm::one_form(const Vec8& comps) {
    KForm f(1);
    for (int i = 0; i < kDim; ++i) f.add(static_cast<Mask>(1u << i), comps[i]);
    return f;
}

KForm KForm::basis(std::initializer_list<int> indices, double coeff) {
    KForm f(static_cast<int>(indices.size()));
    Mask m = 0;
    double sign = 1.0;
    for (int i : indices) {
        if (i < 0 || i >= kDim) throw std::out_of_range("basis index out of range");
        if (m & (1u << i)) return f;  // repeated factor
        // Moving theta^i left past the larger indices already present.
        if (bits_above(m, i) % 2) sign = -sign;
        m |= static_cast<Mask>(1u << i);
    }
    f.add(m, sign * coeff);
    return f;
}

double KForm::coeff(Mask m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? 0.0 : it->second;
}

double KForm::coeff(std::initializer_list<int> indices) const {
    const KForm b = basis(indices);
    if (b.is_zero()) return 0.0;
    const auto& [m, sign] = *b.terms_.begin();
    return sign * coeff(m);
}

void KForm::add(Mask m, double value) {
    if (mask_degree(m) != degree_) throw std::invalid_argument("mask degree mismatch");
    if (value == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(m, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double KForm::max_abs() const {
    double out = 0.0;
    for (const auto& [m, c] : terms_) out = std::max(out, std::abs(c));
    return out;
}

KForm KForm::pruned(double tol) const {
    KForm out(degree_);
    for (const auto& [m, c] : terms_)
        if (std::abs(c) > tol) out.terms_.emplace(m, c);
    return out;
}

Eigen::VectorXd KForm::dense() const {
    const auto& masks = masks_of_degree(degree_);
    Eigen::VectorXd v(masks.size());
    for (std::size_t i = 0; i < masks.size(); ++i) v[static_cast<Eigen::Index>(i)] = coeff(masks[i]);
    return v;
}

KForm KForm::from_dense(int degree, const Eigen::VectorXd& coeffs) {
    const auto& masks = masks_of_degree(degree);
    if (static_cast<std::size_t>(coeffs.size()) != masks.size())
        throw std::invalid_argument("dense coefficient vector has wrong length");
    KForm f(degree);
    for (std::size_t i = 0; i < masks.size(); ++i) f.add(masks[i], coeffs[static_cast<Eigen::Index>(i)]);
    return f;
}

KForm& KForm::operator+=(const KForm& other) {
    if (other.is_zero()) return *this;
    if (is_zero() && degree_ != other.degree_) degree_ = other.degree_;
    if (degree_ != other.degree_) throw std::invalid_argument("adding forms of different degree");
    for (const auto& [m, c] : other.terms_) add(m, c);
    return *this;
}

KForm& KForm::operator-=(const KForm& other) {
    if (other.is_zero()) return *this;
    if (is_zero() && degree_ != other.degree_) degree_ = other.degree_;
    if (degree_ != other.degree_) throw std::invalid_argument("adding forms of different degree");
    for (const auto& [m, c] : other.terms_) add(m, -c);
    return *this;
}

KForm& KForm::operator*=(double s) {
    if (s == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= s;
        if (it->second == 0.0)
            it = terms_.erase(it);
        else
            ++it;
    }
    return *this;
}

TangentVector TangentVector::unit(int i) {
    TangentVector v;
    v.comps[i] = 1.0;
    return v;
}

// ---------------------------------------------------------------------------
// Algebra

KForm wedge(const KForm& a, const KForm& b) {
    if (a.degree() + b.degree() > kDim) throw std::domain_error("degree exceeds 8");
    KForm out(a.degree() + b.degree());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            if (ma & mb) continue;
            out.add(static_cast<Mask>(ma | mb), merge_sign(ma, mb) * ca * cb);
        }
    return out;
}

KForm interior(const TangentVector& v, const KForm& a) {
    if (a.degree() == 0) throw std::invalid_argument("interior product of a 0-form");
    KForm out(a.degree() - 1);
    for (const auto& [m, c] : a.terms())
        for (int i = 0; i < kDim; ++i) {
            if (!(m & (1u << i)) || v.comps[i] == 0.0) continue;
            const double sign = (bits_below(m, i) % 2 == 0) ? 1.0 : -1.0;
            out.add(static_cast<Mask>(m & ~(1u << i)), sign * v.comps[i] * c);
        }
    return out;
}

double evaluate(const KForm& a, const std::vector<TangentVector>& vs) {
    if (static_cast<int>(vs.size()) != a.degree())
        throw std::invalid_argument("evaluate needs exactly deg(a) vectors");
    const int k = a.degree();
    double total = 0.0;
    for (const auto& [m, c] : a.terms()) {
        const auto idx = mask_indices(m);
        std::array<double, kDim * kDim> block{};
        for (int r = 0; r < k; ++r)
            for (int col = 0; col < k; ++col) block[r * kDim + col] = vs[col].comps[idx[r]];
        total += c * (k == 0 ? 1.0 : small_det(block, k));
    }
    return total;
}

KForm change_basis(const KForm& a, const Mat8& m) {
    const int k = a.degree();
    KForm out(k);
    if (k == 0) {
        out += a;
        return out;
    }
    const auto& targets = masks_of_degree(k);
    for (const auto& [src, c] : a.terms()) {
        const auto rows = mask_indices(src);
        for (Mask dst : targets) {
            const auto cols = mask_indices(dst);
            std::array<double, kDim * kDim> block{};
            bool any = false;
            for (int r = 0; r < k; ++r)
                for (int q = 0; q < k; ++q) {
                    const double e = m(rows[r], cols[q]);
                    block[r * kDim + q] = e;
                    any = any || e != 0.0;
                }
            if (!any) continue;
            const double d = small_det(block, k);
            if (d != 0.0) out.add(dst, c * d);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metric

MetricAtPoint::MetricAtPoint(const Mat8& gram) : gram_(gram) {
    if (!gram.allFinite()) throw std::domain_error("metric has non-finite entries");
    const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
    if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::domain_error("metric is not symmetric");
    Eigen::LLT<Mat8> llt(0.5 * (gram + gram.transpose()));
    if (llt.info() != Eigen::Success) throw std::domain_error("metric is not positive definite");
    chol_upper_ = llt.matrixU();
    for (int i = 0; i < kDim; ++i)
        if (!(chol_upper_(i, i) > 0.0)) throw std::domain_error("metric is not positive definite");
    chol_upper_inv_ = chol_upper_.triangularView<Eigen::Upper>().solve(Mat8::Identity());
    volume_density_ = chol_upper_.diagonal().prod();
}

KForm MetricAtPoint::flat(const TangentVector& v) const { return KForm::one_form(gram_ * v.comps); }

TangentVector MetricAtPoint::sharp(const KForm& a) const {
    if (a.degree() != 1) throw std::invalid_argument("sharp expects a 1-form");
    Vec8 comps;
    for (int i = 0; i < kDim; ++i) comps[i] = a.coeff(static_cast<Mask>(1u << i));
    // gram = R^T R
    const Vec8 y = chol_upper_.transpose().triangularView<Eigen::Lower>().solve(comps);
    return TangentVector(chol_upper_.triangularView<Eigen::Upper>().solve(y));
}

double MetricAtPoint::inner(const TangentVector& a, const TangentVector& b) const {
    return a.comps.dot(gram_ * b.comps);
}

KForm MetricAtPoint::to_orthonormal(const KForm& a) const { return change_basis(a, chol_upper_inv_); }

KForm MetricAtPoint::from_orthonormal(const KForm& a) const { return change_basis(a, chol_upper_); }

double MetricAtPoint::inner(const KForm& a, const KForm& b) const {
    if (a.degree() != b.degree()) throw std::invalid_argument("inner product of forms of different degree");
    const KForm oa = to_orthonormal(a);
    const KForm ob = to_orthonormal(b);
    double s = 0.0;
    for (const auto& [m, c] : oa.terms()) s += c * ob.coeff(m);
    return s;
}

double MetricAtPoint::norm(const KForm& a) const { return std::sqrt(std::max(0.0, inner(a, a))); }

KForm hodge_star(const KForm& a, const MetricAtPoint& g, const KForm& orientation) {
    if (orientation.degree() != kDim) throw std::invalid_argument("orientation must be an 8-form");
    constexpr Mask top = 0xFF;
    const double unit = g.to_orthonormal(orientation).coeff(top);
    if (std::abs(std::abs(unit) - 1.0) > 1e-8) throw std::domain_error("orientation is not a unit volume form");
    const double orient = unit > 0 ? 1.0 : -1.0;

    const KForm oa = g.to_orthonormal(a);
    KForm star(kDim - a.degree());
    for (const auto& [m, c] : oa.terms()) {
        const Mask comp = static_cast<Mask>(~m);
        star.add(comp, orient * merge_sign(m, comp) * c);
    }
    return g.from_orthonormal(star);
}

// ---------------------------------------------------------------------------
// Exterior derivative

KForm exterior_derivative(const FormField& field, const Coords& at, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");

    auto in_coordinates = [&](const Coords& x) {
        KForm f = field.form(x);
        return field.coframe ? change_basis(f, field.coframe(x)) : f;
    };

    const KForm centre = in_coordinates(at);
    KForm d(centre.degree() + 1);
    for (int mu = 0; mu < kDim; ++mu) {
        const double h = step * std::max(1.0, std::abs(at[mu]));
        auto shifted = [&](double k) {
            Coords x = at;
            x[mu] += k * h;
            return in_coordinates(x);
        };
        KForm deriv = (shifted(-2.0) - shifted(2.0) + 8.0 * (shifted(1.0) - shifted(-1.0))) * (1.0 / (12.0 * h));
        if (deriv.is_zero()) continue;
        d += wedge(KForm::basis({mu}), deriv);
    }
    if (!field.coframe) return d;
    const Mat8 jinv = field.coframe(at).inverse();
    return change_basis(d, jinv);
}

}  // namespace cayley
