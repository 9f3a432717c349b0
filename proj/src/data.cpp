#include "dragonnet/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "dragonnet/errors.hpp"

namespace dragonnet {

Eigen::Index Dataset::count_treated() const {
    Eigen::Index c = 0;
    for (Eigen::Index i = 0; i < t.size(); ++i)
        if (t[i] == 1.0) ++c;
    return c;
}

Dataset Dataset::subset(const std::vector<Eigen::Index>& idx) const {
    Dataset out;
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    out.X.resize(m, d());
    out.t.resize(m);
    out.y.resize(m);
    if (y_cf) out.y_cf = Vector(m);
    if (mu0) out.mu0 = Vector(m);
    if (mu1) out.mu1 = Vector(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const Eigen::Index j = idx[static_cast<std::size_t>(i)];
        out.X.row(i) = X.row(j);
        out.t[i] = t[j];
        out.y[i] = y[j];
        if (y_cf) (*out.y_cf)[i] = (*y_cf)[j];
        if (mu0) (*out.mu0)[i] = (*mu0)[j];
        if (mu1) (*out.mu1)[i] = (*mu1)[j];
    }
    return out;
}

void Dataset::validate() const {
    const Eigen::Index m = n();
    if (t.size() != m || y.size() != m)
        throw ValidationError("dataset: X, t, y sample counts differ");
    for (const auto* v : {&y_cf, &mu0, &mu1})
        if (v->has_value() && (*v)->size() != m)
            throw ValidationError("dataset: optional field length differs from n");
    for (Eigen::Index i = 0; i < m; ++i)
        if (t[i] != 0.0 && t[i] != 1.0) {
            std::ostringstream os;
            os << "dataset: non-binary treatment value " << t[i] << " at row " << i;
            throw ValidationError(os.str());
        }
}

namespace {

std::vector<double> parse_csv_row(const std::string& path, const std::string& line, long lineno) {
    std::vector<double> vals;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t comma = line.find(',', start);
        const std::string cell = line.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            // allow trailing whitespace only
            for (std::size_t i = used; i < cell.size(); ++i)
                if (!std::isspace(static_cast<unsigned char>(cell[i])))
                    throw std::invalid_argument(cell);
            vals.push_back(v);
        } catch (const std::exception&) {
            throw ParseError(path, lineno, "cannot parse field '" + cell + "'");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return vals;
}

}  // namespace

Dataset load_ihdp_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto vals = parse_csv_row(path, line, lineno);
        if (vals.size() < 6)
            throw ParseError(path, lineno, "expected at least 6 columns (t,y,y_cf,mu0,mu1,x...)");
        if (!rows.empty() && vals.size() != rows.front().size())
            throw ParseError(path, lineno, "inconsistent column count");
        rows.push_back(std::move(vals));
    }
    if (rows.empty()) throw ParseError(path, 0, "empty file");

    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index d = static_cast<Eigen::Index>(rows.front().size()) - 5;
    Dataset ds;
    ds.X.resize(n, d);
    ds.t.resize(n);
    ds.y.resize(n);
    ds.y_cf = Vector(n);
    ds.mu0 = Vector(n);
    ds.mu1 = Vector(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = rows[static_cast<std::size_t>(i)];
        ds.t[i] = r[0];
        ds.y[i] = r[1];
        (*ds.y_cf)[i] = r[2];
        (*ds.mu0)[i] = r[3];
        (*ds.mu1)[i] = r[4];
        for (Eigen::Index j = 0; j < d; ++j)
            ds.X(i, j) = r[static_cast<std::size_t>(5 + j)];
    }
    ds.validate();
    return ds;
}

void save_realization_csv(const Dataset& ds, const std::string& path) {
    if (!ds.y_cf || !ds.mu0 || !ds.mu1)
        throw ValidationError("save_realization_csv: dataset lacks counterfactual/ground-truth fields");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[64];
    auto put = [&](double v, char sep) {
        std::snprintf(buf, sizeof buf, "%.17g%c", v, sep);
        out << buf;
    };
    for (Eigen::Index i = 0; i < ds.n(); ++i) {
        put(ds.t[i], ',');
        put(ds.y[i], ',');
        put((*ds.y_cf)[i], ',');
        put((*ds.mu0)[i], ',');
        put((*ds.mu1)[i], ',');
        for (Eigen::Index j = 0; j < ds.d(); ++j)
            put(ds.X(i, j), j + 1 == ds.d() ? '\n' : ',');
    }
    if (!out) throw IoError("write failed for " + path);
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    if (spec.n <= 0 || spec.d <= 0)
        throw ValidationError("generate_synthetic: n and d must be positive");
    if (spec.noise_sd < 0.0)
        throw ValidationError("generate_synthetic: noise_sd must be nonnegative");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    Dataset ds;
    ds.X.resize(spec.n, spec.d);
    for (Eigen::Index i = 0; i < spec.n; ++i)
        for (Eigen::Index j = 0; j < spec.d; ++j)
            ds.X(i, j) = normal(rng);

    // fixed response/confounding coefficients drawn once per seed
    Vector w_conf(spec.d), a_lin(spec.d), b_sin(spec.d);
    for (Eigen::Index j = 0; j < spec.d; ++j) {
        w_conf[j] = normal(rng);
        a_lin[j] = normal(rng);
        b_sin[j] = normal(rng);
    }
    w_conf.normalize();

    ds.t.resize(spec.n);
    ds.y.resize(spec.n);
    ds.y_cf = Vector(spec.n);
    ds.mu0 = Vector(spec.n);
    ds.mu1 = Vector(spec.n);

    for (Eigen::Index i = 0; i < spec.n; ++i) {
        const Vector x = ds.X.row(i).transpose();
        const double logit = spec.confounding_strength * w_conf.dot(x);
        const double p = 1.0 / (1.0 + std::exp(-logit));
        ds.t[i] = unif(rng) < p ? 1.0 : 0.0;
        const double f = a_lin.dot(x) + std::sin(b_sin.dot(x));
        (*ds.mu0)[i] = f;
        (*ds.mu1)[i] = f + spec.ate_target;  // constant effect, known ATE
        const double eps_f = spec.noise_sd * normal(rng);
        const double eps_cf = spec.noise_sd * normal(rng);
        const double mu_t = ds.t[i] == 1.0 ? (*ds.mu1)[i] : (*ds.mu0)[i];
        const double mu_c = ds.t[i] == 1.0 ? (*ds.mu0)[i] : (*ds.mu1)[i];
        ds.y[i] = mu_t + eps_f;
        (*ds.y_cf)[i] = mu_c + eps_cf;
    }
    return ds;
}

Split split_dataset(const Dataset& ds, double validation_fraction,
                    double test_fraction, std::uint64_t seed) {
    if (validation_fraction < 0.0 || test_fraction < 0.0 ||
        validation_fraction + test_fraction >= 1.0)
        throw ValidationError("split_dataset: fractions must be nonnegative and sum < 1");

    std::vector<Eigen::Index> groups[2];
    for (Eigen::Index i = 0; i < ds.n(); ++i)
        groups[static_cast<int>(ds.t[i])].push_back(i);

    std::mt19937_64 rng(seed);
    Split split;
    for (int g : {0, 1}) {
        auto& idx = groups[g];
        if (idx.empty()) continue;
        std::shuffle(idx.begin(), idx.end(), rng);
        const auto gn = static_cast<double>(idx.size());
        auto part = [&](double frac) {
            if (frac == 0.0) return std::size_t{0};
            auto c = static_cast<std::size_t>(std::lround(frac * gn));
            return std::max(c, std::size_t{1});
        };
        const std::size_t n_test = part(test_fraction);
        const std::size_t n_val = part(validation_fraction);
        if (n_test + n_val >= idx.size())
            throw GroupTooSmallError(g, static_cast<long>(idx.size()),
                                     static_cast<int>(n_test + n_val + 1));
        std::size_t i = 0;
        for (; i < n_test; ++i) split.test_idx.push_back(idx[i]);
        for (; i < n_test + n_val; ++i) split.val_idx.push_back(idx[i]);
        for (; i < idx.size(); ++i) split.train_idx.push_back(idx[i]);
    }
    std::sort(split.train_idx.begin(), split.train_idx.end());
    std::sort(split.val_idx.begin(), split.val_idx.end());
    std::sort(split.test_idx.begin(), split.test_idx.end());
    return split;
}

Standardizer Standardizer::fit(const Matrix& train_rows) {
    if (train_rows.rows() < 1)
        throw ValidationError("standardize: no training rows");
    Standardizer s;
    s.mean = train_rows.colwise().mean();
    s.std.resize(train_rows.cols());
    for (Eigen::Index j = 0; j < train_rows.cols(); ++j) {
        const double var =
            (train_rows.col(j).array() - s.mean[j]).square().sum() /
            static_cast<double>(train_rows.rows());
        const double sd = std::sqrt(var);
        s.std[j] = sd > 0.0 ? sd : 1.0;  // zero-variance columns pass through
    }
    return s;
}

Matrix Standardizer::apply(const Matrix& rows) const {
    if (rows.cols() != mean.size())
        throw ValidationError("standardize: column count mismatch");
    return (rows.rowwise() - mean.transpose()).array().rowwise() /
           std.transpose().array();
}

Matrix Standardizer::invert(const Matrix& rows) const {
    if (rows.cols() != mean.size())
        throw ValidationError("standardize: column count mismatch");
    return (rows.array().rowwise() * std.transpose().array()).matrix().rowwise() +
           mean.transpose();
}

}  // namespace dragonnet
