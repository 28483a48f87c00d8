#pragma once

// Pointwise exterior algebra over an 8-dimensional coframe.
//
// A KForm stores the coefficients of a degree-k alternating form with respect
// to an ordered coframe {theta^0, ..., theta^7}. Basis k-forms are encoded as
// 8-bit masks: bit i set means theta^i is a factor, and the factors are always
// wedged in increasing index order. The mask is therefore the canonical
// strictly-increasing index tuple.

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace cayley {

inline constexpr int kDim = 8;

using Mask = std::uint8_t;
using Vec8 = Eigen::Matrix<double, kDim, 1>;
using Mat8 = Eigen::Matrix<double, kDim, kDim>;
using Coords = std::array<double, kDim>;

/// Indices encoded in a mask, increasing.
std::vector<int> mask_indices(Mask m);
int mask_degree(Mask m);
/// All masks of a given degree, in increasing numeric order.
const std::vector<Mask>& masks_of_degree(int degree);

class KForm {
public:
    using Terms = std::map<Mask, double>;

    KForm() = default;
    explicit KForm(int degree);

    static KForm scalar(double value);
    /// The 1-form sum_i comps[i] theta^i.
    static KForm one_form(const Vec8& comps);
    /// coeff * theta^{i_1} ^ ... ^ theta^{i_k}. Indices need not be sorted;
    /// the permutation sign is absorbed. Repeated indices give zero.
    static KForm basis(std::initializer_list<int> indices, double coeff = 1.0);

    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    double coeff(Mask m) const;
    /// Coefficient of the (sorted) tuple, sign-adjusted if unsorted.
    double coeff(std::initializer_list<int> indices) const;

    /// Adds `value` to the coefficient of mask m; exact zeros are erased.
    void add(Mask m, double value);

    double max_abs() const;
    /// Drops coefficients with |c| <= tol.
    KForm pruned(double tol) const;
    /// Dense coefficient vector in masks_of_degree(degree()) order.
    Eigen::VectorXd dense() const;
    static KForm from_dense(int degree, const Eigen::VectorXd& coeffs);

    KForm& operator+=(const KForm& other);
    KForm& operator-=(const KForm& other);
    KForm& operator*=(double s);

    friend KForm operator+(KForm a, const KForm& b) { return a += b; }
    friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
    friend KForm operator-(KForm a) { return a *= -1.0; }
    friend KForm operator*(KForm a, double s) { return a *= s; }
    friend KForm operator*(double s, KForm a) { return a *= s; }

private:
    int degree_ = 0;
    Terms terms_;
};

/// A tangent vector in the frame dual to the active coframe.
struct TangentVector {
    Vec8 comps = Vec8::Zero();

    TangentVector() = default;
    explicit TangentVector(const Vec8& c) : comps(c) {}

    static TangentVector unit(int i);

    double operator[](int i) const { return comps[i]; }
    double& operator[](int i) { return comps[i]; }

    TangentVector& operator+=(const TangentVector& o) { comps += o.comps; return *this; }
    TangentVector& operator-=(const TangentVector& o) { comps -= o.comps; return *this; }
    friend TangentVector operator+(TangentVector a, const TangentVector& b) { return a += b; }
    friend TangentVector operator-(TangentVector a, const TangentVector& b) { return a -= b; }
    friend TangentVector operator*(double s, TangentVector a) { a.comps *= s; return a; }
    friend TangentVector operator*(TangentVector a, double s) { a.comps *= s; return a; }
};

/// Exterior product. Throws std::domain_error("degree exceeds 8").
KForm wedge(const KForm& a, const KForm& b);

/// Interior product v _| a. Throws std::invalid_argument for 0-forms.
KForm interior(const TangentVector& v, const KForm& a);

/// Evaluates a k-form on k vectors: a(v_1, ..., v_k).
double evaluate(const KForm& a, const std::vector<TangentVector>& vs);

/// Re-expresses a form under a linear change of coframe.
/// `m` writes the old basis in terms of the new one:
///     theta_old^a = sum_b m(a, b) theta_new^b.
KForm change_basis(const KForm& a, const Mat8& m);

/// Metric coefficients g(e_a, e_b) in the active frame.
///
/// Construction factorizes the Gram matrix; a non-symmetric or non positive
/// definite input throws std::domain_error.
class MetricAtPoint {
public:
    MetricAtPoint() : MetricAtPoint(Mat8::Identity()) {}
    explicit MetricAtPoint(const Mat8& gram);

    const Mat8& gram() const { return gram_; }
    /// Upper-triangular R with gram = R^T R. Rows of R are an orthonormal
    /// coframe expressed in the active coframe.
    const Mat8& orthonormal_coframe() const { return chol_upper_; }
    /// sqrt(det gram).
    double volume_density() const { return volume_density_; }

    KForm flat(const TangentVector& v) const;
    TangentVector sharp(const KForm& a) const;

    double inner(const TangentVector& a, const TangentVector& b) const;
    /// Induced inner product on k-forms.
    double inner(const KForm& a, const KForm& b) const;
    double norm(const KForm& a) const;

    /// The k-form in an orthonormal coframe (rows of orthonormal_coframe()).
    KForm to_orthonormal(const KForm& a) const;
    KForm from_orthonormal(const KForm& a) const;

private:
    Mat8 gram_;
    Mat8 chol_upper_;
    Mat8 chol_upper_inv_;
    double volume_density_ = 0.0;
};

/// Hodge star of `a` for metric `g` with the orientation fixed by `orientation`.
/// The orientation must be a unit-norm 8-form, else std::domain_error.
KForm hodge_star(const KForm& a, const MetricAtPoint& g, const KForm& orientation);

/// A form-valued field on a coordinate chart, expressed in a coframe that may
/// itself vary with the point.
struct FormField {
    /// Form coefficients in the coframe at x.
    std::function<KForm(const Coords&)> form;
    /// Rows: coframe 1-forms in coordinate differentials, theta^a = J(a, mu) dx^mu.
    /// Empty means the coordinate coframe itself.
    std::function<Mat8(const Coords&)> coframe;
};

/// Numerical exterior derivative at `at` by fourth-order central differences
/// of the coordinate coefficients. The step along coordinate mu is
/// step * max(1, |x_mu|). The result is expressed in the field's coframe at
/// `at`. Evaluation errors from the field (excluded loci) propagate.
KForm exterior_derivative(const FormField& field, const Coords& at, double step = 1e-5);

}  // namespace cayley
