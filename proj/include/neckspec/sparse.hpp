#ifndef NECKSPEC_SPARSE_HPP
#define NECKSPEC_SPARSE_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace neckspec {

/// Symmetric sparse matrix in CSR form. Both triangles are stored so that
/// matvec is a plain row sweep; symmetry is guaranteed by the builder.
class SparseSym {
public:
    enum class Kind { stiffness, mass };

    SparseSym() = default;

    /// Build from (i, j, v) triplets; duplicates are summed, the transpose
    /// entry is NOT added automatically (callers emit both or use add_sym).
    static SparseSym from_triplets(int n, Kind kind,
                                   std::vector<int> rows, std::vector<int> cols,
                                   std::vector<double> vals);

    int size() const { return n_; }
    Kind kind() const { return kind_; }

    void matvec(const double* x, double* y) const;
    std::vector<double> matvec(const std::vector<double>& x) const;

    double quad_form(const std::vector<double>& u) const;       // u' A u
    double bilinear(const std::vector<double>& u,
                    const std::vector<double>& v) const;        // u' A v

    std::vector<double> diagonal() const;
    std::size_t nnz() const { return vals_.size(); }

    const std::vector<int>& row_ptr() const { return row_ptr_; }
    const std::vector<int>& col_idx() const { return col_idx_; }
    const std::vector<double>& values() const { return vals_; }

    /// Largest |A_ij - A_ji| over stored entries.
    double symmetry_defect() const;

    /// MatrixMarket coordinate output (symmetric: lower triangle only).
    void write_matrix_market(std::ostream& os) const;
    static SparseSym read_matrix_market(std::istream& is, Kind kind);

private:
    int n_ = 0;
    Kind kind_ = Kind::stiffness;
    std::vector<int> row_ptr_;
    std::vector<int> col_idx_;
    std::vector<double> vals_;
};

} // namespace neckspec

#endif
