#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

namespace stablecz {
namespace symbols {

enum class EntryType { zero, constant, fn_y, fn_xy };

/// One coefficient a^{l,m} of a matrix symbol: a constant, a bounded
/// function of y, or a bounded function of (x,y). Named builtins only --
/// no expression parsing.
struct Entry {
    EntryType type = EntryType::zero;
    double value = 0.0;
    std::string expr;  // builtin name for fn_y / fn_xy
    std::function<double(double)> fy;
    std::function<double(const Eigen::VectorXd&, double)> fxy;
    std::vector<double> y_breaks;  // discontinuities, as quadrature hints

    double eval(const Eigen::VectorXd& x, double y) const;
    double eval_y(double y) const;  // requires x-independence
    bool is_zero() const { return type == EntryType::zero; }
    bool x_dependent() const { return type == EntryType::fn_xy; }
};

Entry make_const(double v);
Entry make_fy(const std::string& builtin_name);
Entry make_fxy(const std::string& builtin_name);

/// The (n+1)x(n+1) matrix function A(x,y) modulating the martingale
/// transform. Indices are 1-based with n+1 the vertical slot; entry (l,m)
/// pairs the m-th gradient component at the integration slot with the
/// l-th at the output slot. Entries in the vertical row/column must be
/// x-independent.
class MatrixSymbol {
  public:
    explicit MatrixSymbol(int dim, std::string id = "custom");

    int dim() const { return dim_; }
    int size() const { return dim_ + 1; }
    const std::string& id() const { return id_; }

    void set(int l, int m, Entry e);
    const Entry& at(int l, int m) const;

    double norm() const { return norm_; }
    void set_norm(double v) { norm_ = v; }

    bool all_spatial() const;  // vertical row and column identically zero
    bool x_dependent() const;
    bool constant() const;  // every entry constant or zero

    /// Structural checks: vertical entries x-independent, declared norm
    /// not exceeded by the sampled operator norm. Throws on violation.
    void validate() const;

    Eigen::MatrixXd evaluate(const Eigen::VectorXd& x, double y) const;
    Eigen::MatrixXd evaluate_y(double y) const;  // x-independent symbols

    std::vector<double> y_break_hints() const;

    // --- catalog ---------------------------------------------------
    static MatrixSymbol zero(int dim);
    static MatrixSymbol identity(int dim);
    static MatrixSymbol identity_spatial(int dim);
    /// A_j: +1 at (n+1, j), -1 at (j, n+1); the Riesz direction matrix.
    static MatrixSymbol riesz(int dim, int j);
    /// A^{(i,j)}: -1 at (i, j); the second-order Riesz matrix.
    static MatrixSymbol riesz_second(int dim, int i, int j);
    /// Named lookup: zero, identity, identity_spatial, riesz_<j>,
    /// riesz2_<i><j>, diag_exp_y, spatial_sin_x; otherwise throws.
    static MatrixSymbol from_catalog(const std::string& name, int dim);
    /// Catalog name or a path to a matrix JSON file.
    static MatrixSymbol from_name_or_file(const std::string& name_or_path,
                                          int dim);

  private:
    int dim_;
    std::string id_;
    double norm_ = 0.0;
    std::vector<Entry> entries_;  // (dim+1)^2, row-major
};

MatrixSymbol load_matrix_json(const std::string& path);
void save_matrix_json(const MatrixSymbol&, const std::string& path);

}  // namespace symbols
}  // namespace stablecz
