#include "neckspec/sparse.hpp"
#include "neckspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace neckspec {

SparseSym SparseSym::from_triplets(int n, Kind kind,
                                   std::vector<int> rows, std::vector<int> cols,
                                   std::vector<double> vals) {
    if (rows.size() != cols.size() || rows.size() != vals.size())
        throw domain_error("from_triplets: triplet arrays have mismatched lengths");
    SparseSym A;
    A.n_ = n;
    A.kind_ = kind;

    const std::size_t m = vals.size();
    std::vector<int> count(static_cast<std::size_t>(n) + 1, 0);
    for (std::size_t t = 0; t < m; ++t) {
        if (rows[t] < 0 || rows[t] >= n || cols[t] < 0 || cols[t] >= n)
            throw domain_error("from_triplets: index out of range");
        ++count[static_cast<std::size_t>(rows[t]) + 1];
    }
    for (int i = 0; i < n; ++i) count[i + 1] += count[i];

    std::vector<int> ci(m);
    std::vector<double> cv(m);
    std::vector<int> cursor(count.begin(), count.end() - 1);
    for (std::size_t t = 0; t < m; ++t) {
        int pos = cursor[rows[t]]++;
        ci[pos] = cols[t];
        cv[pos] = vals[t];
    }

    // Sort each row by column and merge duplicates.
    A.row_ptr_.assign(1, 0);
    A.col_idx_.reserve(m);
    A.vals_.reserve(m);
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < n; ++i) {
        row.clear();
        for (int p = count[i]; p < count[i + 1]; ++p) row.emplace_back(ci[p], cv[p]);
        std::sort(row.begin(), row.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t q = 0; q < row.size(); ++q) {
            if (!A.col_idx_.empty() &&
                static_cast<int>(A.col_idx_.size()) > A.row_ptr_.back() &&
                A.col_idx_.back() == row[q].first) {
                A.vals_.back() += row[q].second;
            } else {
                A.col_idx_.push_back(row[q].first);
                A.vals_.push_back(row[q].second);
            }
        }
        A.row_ptr_.push_back(static_cast<int>(A.col_idx_.size()));
    }
    return A;
}

void SparseSym::matvec(const double* x, double* y) const {
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            acc += vals_[p] * x[col_idx_[p]];
        y[i] = acc;
    }
}

std::vector<double> SparseSym::matvec(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_)
        throw domain_error("matvec: size mismatch");
    std::vector<double> y(static_cast<std::size_t>(n_));
    matvec(x.data(), y.data());
    return y;
}

double SparseSym::quad_form(const std::vector<double>& u) const {
    return bilinear(u, u);
}

double SparseSym::bilinear(const std::vector<double>& u,
                           const std::vector<double>& v) const {
    if (static_cast<int>(u.size()) != n_ || static_cast<int>(v.size()) != n_)
        throw domain_error("bilinear: size mismatch");
    double acc = 0.0;
    for (int i = 0; i < n_; ++i) {
        double row = 0.0;
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            row += vals_[p] * v[col_idx_[p]];
        acc += u[i] * row;
    }
    return acc;
}

std::vector<double> SparseSym::diagonal() const {
    std::vector<double> d(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            if (col_idx_[p] == i) d[i] += vals_[p];
    return d;
}

double SparseSym::symmetry_defect() const {
    double worst = 0.0;
    for (int i = 0; i < n_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            int j = col_idx_[p];
            if (j < i) continue;
            double aji = 0.0;
            for (int q = row_ptr_[j]; q < row_ptr_[j + 1]; ++q)
                if (col_idx_[q] == i) { aji = vals_[q]; break; }
            worst = std::max(worst, std::abs(vals_[p] - aji));
        }
    }
    return worst;
}

void SparseSym::write_matrix_market(std::ostream& os) const {
    std::size_t nnz_lower = 0;
    for (int i = 0; i < n_; ++i)
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p)
            if (col_idx_[p] <= i) ++nnz_lower;

    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << n_ << " " << n_ << " " << nnz_lower << "\n";
    char buf[64];
    for (int i = 0; i < n_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            if (col_idx_[p] > i) continue;
            std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i + 1, col_idx_[p] + 1, vals_[p]);
            os << buf;
        }
    }
}

SparseSym SparseSym::read_matrix_market(std::istream& is, Kind kind) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0)
        throw validation_error("matrix market: missing header banner");
    const bool symmetric = line.find("symmetric") != std::string::npos;
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::istringstream head(line);
    int nr = 0, nc = 0;
    std::size_t nz = 0;
    if (!(head >> nr >> nc >> nz) || nr != nc)
        throw validation_error("matrix market: bad size line");

    std::vector<int> ri, cj;
    std::vector<double> v;
    ri.reserve(nz * 2);
    cj.reserve(nz * 2);
    v.reserve(nz * 2);
    for (std::size_t t = 0; t < nz; ++t) {
        int i, j;
        double x;
        if (!(is >> i >> j >> x))
            throw validation_error("matrix market: truncated entry list");
        ri.push_back(i - 1);
        cj.push_back(j - 1);
        v.push_back(x);
        if (symmetric && i != j) {
            ri.push_back(j - 1);
            cj.push_back(i - 1);
            v.push_back(x);
        }
    }
    return from_triplets(nr, kind, std::move(ri), std::move(cj), std::move(v));
}

} // namespace neckspec
