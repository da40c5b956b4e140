#include "stablecz/symbol.hpp"

#include <algorithm>

#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <stdexcept>

#include "stablecz/jsonio.hpp"

namespace stablecz {
namespace symbols {

namespace {

struct FyBuiltin {
    std::function<double(double)> fn;
    std::vector<double> breaks;
};

const std::map<std::string, FyBuiltin>& fy_catalog() {
    static const std::map<std::string, FyBuiltin> cat = {
        {"one", {[](double) { return 1.0; }, {}}},
        {"indicator_y_lt_1", {[](double y) { return y < 1.0 ? 1.0 : 0.0; }, {1.0}}},
        {"exp_neg_y", {[](double y) { return std::exp(-y); }, {}}},
        {"one_over_one_plus_y", {[](double y) { return 1.0 / (1.0 + y); }, {}}},
    };
    return cat;
}

using FxyFn = std::function<double(const Eigen::VectorXd&, double)>;

const std::map<std::string, FxyFn>& fxy_catalog() {
    static const std::map<std::string, FxyFn> cat = {
        {"sin_x1", [](const Eigen::VectorXd& x, double) { return std::sin(x[0]); }},
        {"sin_x1_exp_neg_y",
         [](const Eigen::VectorXd& x, double y) {
             return std::sin(x[0]) * std::exp(-y);
         }},
        {"gauss_x1",
         [](const Eigen::VectorXd& x, double) {
             return std::exp(-x[0] * x[0]);
         }},
    };
    return cat;
}

}  // namespace

double Entry::eval(const Eigen::VectorXd& x, double y) const {
    switch (type) {
        case EntryType::zero: return 0.0;
        case EntryType::constant: return value;
        case EntryType::fn_y: return fy(y);
        case EntryType::fn_xy: return fxy(x, y);
    }
    return 0.0;
}

double Entry::eval_y(double y) const {
    switch (type) {
        case EntryType::zero: return 0.0;
        case EntryType::constant: return value;
        case EntryType::fn_y: return fy(y);
        case EntryType::fn_xy:
            throw std::logic_error("x-dependent entry evaluated without x");
    }
    return 0.0;
}

Entry make_const(double v) {
    Entry e;
    e.type = v == 0.0 ? EntryType::zero : EntryType::constant;
    e.value = v;
    return e;
}

Entry make_fy(const std::string& name) {
    auto it = fy_catalog().find(name);
    if (it == fy_catalog().end())
        throw std::invalid_argument("unknown y-symbol builtin: " + name);
    Entry e;
    e.type = EntryType::fn_y;
    e.expr = name;
    e.fy = it->second.fn;
    e.y_breaks = it->second.breaks;
    return e;
}

Entry make_fxy(const std::string& name) {
    auto it = fxy_catalog().find(name);
    if (it == fxy_catalog().end())
        throw std::invalid_argument("unknown xy-symbol builtin: " + name);
    Entry e;
    e.type = EntryType::fn_xy;
    e.expr = name;
    e.fxy = it->second;
    return e;
}

MatrixSymbol::MatrixSymbol(int dim, std::string id)
    : dim_(dim), id_(std::move(id)), entries_((dim + 1) * (dim + 1)) {
    if (dim < 1) throw std::invalid_argument("matrix symbol: dim must be >= 1");
}

void MatrixSymbol::set(int l, int m, Entry e) {
    if (l < 1 || l > size() || m < 1 || m > size())
        throw std::out_of_range("matrix symbol index");
    entries_[(l - 1) * size() + (m - 1)] = std::move(e);
}

const Entry& MatrixSymbol::at(int l, int m) const {
    if (l < 1 || l > size() || m < 1 || m > size())
        throw std::out_of_range("matrix symbol index");
    return entries_[(l - 1) * size() + (m - 1)];
}

bool MatrixSymbol::all_spatial() const {
    for (int k = 1; k <= size(); ++k)
        if (!at(size(), k).is_zero() || !at(k, size()).is_zero()) return false;
    return true;
}

bool MatrixSymbol::x_dependent() const {
    for (const auto& e : entries_)
        if (e.x_dependent()) return true;
    return false;
}

bool MatrixSymbol::constant() const {
    for (const auto& e : entries_)
        if (e.type == EntryType::fn_y || e.type == EntryType::fn_xy)
            return false;
    return true;
}

void MatrixSymbol::validate() const {
    // vertical row/column entries must be independent of x
    for (int k = 1; k <= size(); ++k) {
        if (at(size(), k).x_dependent() || at(k, size()).x_dependent())
            throw std::invalid_argument(
                "matrix symbol: entries in the vertical row/column must be "
                "x-independent");
    }
    // declared norm must dominate the sampled operator norm
    double sup = 0.0;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
    for (double xc : {-7.1, -1.3, 0.0, 0.8, 2.0, 6.4}) {
        x.setConstant(xc);
        for (double y : {1e-3, 0.1, 0.7, 1.0 - 1e-12, 1.0 + 1e-12, 3.0, 50.0,
                         1e3}) {
            Eigen::MatrixXd A = evaluate(x, y);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
            sup = std::max(sup, svd.singularValues()[0]);
        }
    }
    if (sup > norm_ * (1.0 + 1e-9) + 1e-12)
        throw std::invalid_argument(
            "matrix symbol: declared norm is below the sampled operator "
            "norm");
}

Eigen::MatrixXd MatrixSymbol::evaluate(const Eigen::VectorXd& x,
                                       double y) const {
    Eigen::MatrixXd A(size(), size());
    for (int l = 1; l <= size(); ++l)
        for (int m = 1; m <= size(); ++m) A(l - 1, m - 1) = at(l, m).eval(x, y);
    return A;
}

Eigen::MatrixXd MatrixSymbol::evaluate_y(double y) const {
    Eigen::MatrixXd A(size(), size());
    for (int l = 1; l <= size(); ++l)
        for (int m = 1; m <= size(); ++m) A(l - 1, m - 1) = at(l, m).eval_y(y);
    return A;
}

std::vector<double> MatrixSymbol::y_break_hints() const {
    std::vector<double> out;
    for (const auto& e : entries_)
        out.insert(out.end(), e.y_breaks.begin(), e.y_breaks.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MatrixSymbol MatrixSymbol::zero(int dim) {
    MatrixSymbol A(dim, "zero");
    A.set_norm(0.0);
    return A;
}

MatrixSymbol MatrixSymbol::identity(int dim) {
    MatrixSymbol A(dim, "identity");
    for (int k = 1; k <= dim + 1; ++k) A.set(k, k, make_const(1.0));
    A.set_norm(1.0);
    return A;
}

MatrixSymbol MatrixSymbol::identity_spatial(int dim) {
    MatrixSymbol A(dim, "identity_spatial");
    for (int k = 1; k <= dim; ++k) A.set(k, k, make_const(1.0));
    A.set_norm(1.0);
    return A;
}

MatrixSymbol MatrixSymbol::riesz(int dim, int j) {
    if (j < 1 || j > dim) throw std::invalid_argument("riesz: bad direction");
    MatrixSymbol A(dim, "riesz_" + std::to_string(j));
    A.set(dim + 1, j, make_const(1.0));
    A.set(j, dim + 1, make_const(-1.0));
    A.set_norm(1.0);
    return A;
}

MatrixSymbol MatrixSymbol::riesz_second(int dim, int i, int j) {
    if (i < 1 || i > dim || j < 1 || j > dim)
        throw std::invalid_argument("riesz_second: bad indices");
    MatrixSymbol A(dim,
                   "riesz2_" + std::to_string(i) + std::to_string(j));
    A.set(i, j, make_const(-1.0));
    A.set_norm(1.0);
    return A;
}

MatrixSymbol MatrixSymbol::from_catalog(const std::string& name, int dim) {
    if (name == "zero") return zero(dim);
    if (name == "identity") return identity(dim);
    if (name == "identity_spatial") return identity_spatial(dim);
    if (name.rfind("riesz2_", 0) == 0 && name.size() == 9)
        return riesz_second(dim, name[7] - '0', name[8] - '0');
    if (name.rfind("riesz_", 0) == 0 && name.size() == 7)
        return riesz(dim, name[6] - '0');
    if (name == "diag_exp_y") {
        MatrixSymbol A(dim, name);
        for (int k = 1; k <= dim + 1; ++k) A.set(k, k, make_fy("exp_neg_y"));
        A.set_norm(1.0);
        return A;
    }
    if (name == "spatial_sin_x") {
        MatrixSymbol A(dim, name);
        A.set(1, 1, make_fxy("sin_x1"));
        A.set_norm(1.0);
        return A;
    }
    throw std::invalid_argument("unknown symbol catalog name: " + name);
}

MatrixSymbol MatrixSymbol::from_name_or_file(const std::string& name_or_path,
                                             int dim) {
    if (name_or_path.find(".json") != std::string::npos) {
        MatrixSymbol A = load_matrix_json(name_or_path);
        if (A.dim() != dim)
            throw std::invalid_argument("matrix file dimension mismatch");
        return A;
    }
    return from_catalog(name_or_path, dim);
}

MatrixSymbol load_matrix_json(const std::string& path) {
    json j = read_json(path);
    MatrixSymbol A(j.at("dim").get<int>(), path);
    for (const auto& je : j.at("entries")) {
        const int l = je.at("i").get<int>(), m = je.at("j").get<int>();
        const std::string type = je.at("type").get<std::string>();
        if (type == "const")
            A.set(l, m, make_const(je.at("value").get<double>()));
        else if (type == "fy")
            A.set(l, m, make_fy(je.at("expr").get<std::string>()));
        else if (type == "fxy")
            A.set(l, m, make_fxy(je.at("expr").get<std::string>()));
        else
            throw std::invalid_argument("matrix entry type must be "
                                        "const|fy|fxy");
    }
    A.set_norm(j.at("norm").get<double>());
    A.validate();
    return A;
}

void save_matrix_json(const MatrixSymbol& A, const std::string& path) {
    json j;
    j["dim"] = A.dim();
    j["norm"] = A.norm();
    json entries = json::array();
    for (int l = 1; l <= A.size(); ++l) {
        for (int m = 1; m <= A.size(); ++m) {
            const Entry& e = A.at(l, m);
            if (e.is_zero()) continue;
            json je{{"i", l}, {"j", m}};
            if (e.type == EntryType::constant) {
                je["type"] = "const";
                je["value"] = e.value;
            } else {
                je["type"] = e.type == EntryType::fn_y ? "fy" : "fxy";
                je["expr"] = e.expr;
            }
            entries.push_back(je);
        }
    }
    j["entries"] = entries;
    atomic_write_json(path, j);
}

}  // namespace symbols
}  // namespace stablecz
