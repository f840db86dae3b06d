#pragma once

// Exact integer linear algebra on sparse matrices: Smith normal form with
// optional unimodular transforms, cokernels as finitely presented abelian
// groups, integer lattice membership with certificates, and a column
// reduction that yields the integer kernel of very sparse matrices projected
// through a coinvariants map.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mwkit/bigint.hpp"

namespace mwkit {

class SparseIntMatrix {
  public:
    SparseIntMatrix() = default;
    SparseIntMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    const Int& at(int r, int c) const {
        check(r, c);
        static const Int zero = 0;
        auto it = entries_.find({r, c});
        return it == entries_.end() ? zero : it->second;
    }

    void set(int r, int c, Int v) {
        check(r, c);
        if (v == 0)
            entries_.erase({r, c});
        else
            entries_[{r, c}] = std::move(v);
    }

    void add(int r, int c, const Int& v) { set(r, c, at(r, c) + v); }

    // Entries in row-major canonical order.
    const std::map<std::pair<int, int>, Int>& entries() const { return entries_; }

    size_t nnz() const { return entries_.size(); }

    SparseIntMatrix transposed() const {
        SparseIntMatrix t(cols_, rows_);
        for (const auto& [rc, v] : entries_) t.set(rc.second, rc.first, v);
        return t;
    }

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("matrix/vector size mismatch");
        std::vector<Int> y(rows_, 0);
        for (const auto& [rc, v] : entries_) y[rc.first] += v * x[rc.second];
        return y;
    }

    bool operator==(const SparseIntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }

  private:
    void check(int r, int c) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw std::out_of_range("matrix index out of range");
    }

    int rows_ = 0, cols_ = 0;
    std::map<std::pair<int, int>, Int> entries_;
};

struct SmithForm {
    std::vector<Int> diag;  // nonzero invariant factors, d_i | d_{i+1}
    std::optional<SparseIntMatrix> left;   // L, rows x rows
    std::optional<SparseIntMatrix> right;  // R, cols x cols
    long rank() const { return static_cast<long>(diag.size()); }
};

namespace detail {

// Working state for row/column elimination over Z. Rows hold col->value maps;
// col_rows gives the inverse index. Transforms are tracked when requested.
class SnfWorker {
  public:
    SnfWorker(const SparseIntMatrix& a, bool keep)
        : nrows_(a.rows()), ncols_(a.cols()), keep_(keep), rows_(a.rows()), col_rows_(a.cols()) {
        for (const auto& [rc, v] : a.entries()) {
            rows_[rc.first][rc.second] = v;
            col_rows_[rc.second].insert(rc.first);
        }
        if (keep_) {
            lrows_.resize(nrows_);
            for (int i = 0; i < nrows_; ++i) lrows_[i][i] = 1;
            rcols_.resize(ncols_);
            for (int j = 0; j < ncols_; ++j) rcols_[j][j] = 1;
        }
    }

    SmithForm run() {
        int k = 0;
        int bound = std::min(nrows_, ncols_);
        while (k < bound) {
            auto piv = find_pivot(k);
            if (!piv) break;
            move_pivot(k, piv->first, piv->second);
            clean_pivot(k);
            ++k;
        }
        normalize_signs(k);
        enforce_divisibility(k);
        SmithForm out;
        for (int i = 0; i < k; ++i) out.diag.push_back(rows_[i].at(i));
        if (keep_) {
            out.left = pack(lrows_, nrows_, nrows_);
            out.right = pack_cols(rcols_, ncols_, ncols_);
        }
        return out;
    }

  private:
    static SparseIntMatrix pack(const std::vector<std::map<int, Int>>& rows, int nr, int nc) {
        SparseIntMatrix m(nr, nc);
        for (int r = 0; r < nr; ++r)
            for (const auto& [c, v] : rows[r]) m.set(r, c, v);
        return m;
    }
    static SparseIntMatrix pack_cols(const std::vector<std::map<int, Int>>& cols, int nr, int nc) {
        SparseIntMatrix m(nr, nc);
        for (int c = 0; c < nc; ++c)
            for (const auto& [r, v] : cols[c]) m.set(r, c, v);
        return m;
    }

    const Int& val(int r, int c) const {
        static const Int zero = 0;
        auto it = rows_[r].find(c);
        return it == rows_[r].end() ? zero : it->second;
    }

    void put(int r, int c, const Int& v) {
        if (v == 0) {
            rows_[r].erase(c);
            col_rows_[c].erase(r);
        } else {
            rows_[r][c] = v;
            col_rows_[c].insert(r);
        }
    }

    // row_dst -= q * row_src, on A and L
    void row_op(int dst, int src, const Int& q) {
        if (q == 0) return;
        for (const auto& [c, v] : rows_[src]) put(dst, c, val(dst, c) - q * v);
        if (keep_)
            for (const auto& [c, v] : lrows_[src]) {
                Int nv = get0(lrows_[dst], c) - q * v;
                if (nv == 0)
                    lrows_[dst].erase(c);
                else
                    lrows_[dst][c] = nv;
            }
    }

    // col_dst -= q * col_src, on A and R
    void col_op(int dst, int src, const Int& q) {
        if (q == 0) return;
        auto rows_touching = col_rows_[src];
        for (int r : rows_touching) put(r, dst, val(r, dst) - q * val(r, src));
        if (keep_)
            for (const auto& [r, v] : rcols_[src]) {
                Int nv = get0(rcols_[dst], r) - q * v;
                if (nv == 0)
                    rcols_[dst].erase(r);
                else
                    rcols_[dst][r] = nv;
            }
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        std::set<int> cols;
        for (const auto& [c, v] : rows_[a]) cols.insert(c);
        for (const auto& [c, v] : rows_[b]) cols.insert(c);
        std::swap(rows_[a], rows_[b]);
        for (int c : cols) {
            col_rows_[c].erase(a);
            col_rows_[c].erase(b);
            if (rows_[a].count(c)) col_rows_[c].insert(a);
            if (rows_[b].count(c)) col_rows_[c].insert(b);
        }
        if (keep_) std::swap(lrows_[a], lrows_[b]);
    }

    void swap_cols(int a, int b) {
        if (a == b) return;
        std::set<int> touched = col_rows_[a];
        for (int r : col_rows_[b]) touched.insert(r);
        for (int r : touched) {
            Int va = val(r, a), vb = val(r, b);
            put(r, a, vb);
            put(r, b, va);
        }
        if (keep_) std::swap(rcols_[a], rcols_[b]);
    }

    void negate_row(int r) {
        for (auto& [c, v] : rows_[r]) v = -v;
        if (keep_)
            for (auto& [c, v] : lrows_[r]) v = -v;
    }

    static Int get0(const std::map<int, Int>& m, int k) {
        auto it = m.find(k);
        return it == m.end() ? Int(0) : it->second;
    }

    // Minimal |value| in the region rows,cols >= k; ties broken by Markowitz
    // cost then by position. Entries of absolute value 1 shortcut the scan.
    std::optional<std::pair<int, int>> find_pivot(int k) const {
        std::optional<std::pair<int, int>> best;
        Int best_abs = 0;
        long best_cost = 0;
        for (int r = k; r < nrows_; ++r) {
            auto it = rows_[r].lower_bound(k);
            for (; it != rows_[r].end(); ++it) {
                Int a = abs_int(it->second);
                long cost = static_cast<long>(rows_[r].size()) * static_cast<long>(col_rows_[it->first].size());
                if (!best || a < best_abs || (a == best_abs && cost < best_cost)) {
                    best = {r, it->first};
                    best_abs = a;
                    best_cost = cost;
                }
            }
            if (best && best_abs == 1 && r - k > 8) break;
        }
        return best;
    }

    void move_pivot(int k, int r, int c) {
        swap_rows(k, r);
        swap_cols(k, c);
    }

    // Make row k and column k zero outside the pivot. Swaps keep the entry of
    // minimal absolute value at the pivot, so the inner loops terminate.
    void clean_pivot(int k) {
        for (;;) {
            // clear column k
            for (;;) {
                int other = -1;
                for (int r : col_rows_[k])
                    if (r != k) {
                        other = r;
                        break;
                    }
                if (other < 0) break;
                Int q = round_div(val(other, k), val(k, k));
                row_op(other, k, q);
                if (val(other, k) != 0) swap_rows(k, other);
            }
            // clear row k
            for (;;) {
                int other = -1;
                for (const auto& [c, v] : rows_[k])
                    if (c != k) {
                        other = c;
                        break;
                    }
                if (other < 0) break;
                Int q = round_div(val(k, other), val(k, k));
                col_op(other, k, q);
                if (val(k, other) != 0) swap_cols(k, other);
            }
            // clearing the row may have refilled the column
            if (col_rows_[k].size() <= 1) break;
        }
    }

    void normalize_signs(int r) {
        for (int i = 0; i < r; ++i)
            if (val(i, i) < 0) negate_row(i);
    }

    void enforce_divisibility(int r) {
        for (int i = 0; i < r; ++i) {
            for (int j = i + 1; j < r; ++j) {
                if (val(j, j) % val(i, i) == 0) continue;
                // fold d_j into row i, then re-clean: (d_i, d_j) -> (gcd, lcm)
                row_op(i, j, Int(-1));
                clean_pivot(i);
                if (val(i, i) < 0) negate_row(i);
                if (val(j, j) < 0) negate_row(j);
            }
        }
    }

    int nrows_, ncols_;
    bool keep_;
    std::vector<std::map<int, Int>> rows_;
    std::vector<std::set<int>> col_rows_;
    std::vector<std::map<int, Int>> lrows_;  // L by rows
    std::vector<std::map<int, Int>> rcols_;  // R by columns
};

}  // namespace detail

inline SmithForm smith_normal_form(const SparseIntMatrix& m, bool keep_transforms = false) {
    detail::SnfWorker w(m, keep_transforms);
    return w.run();
}

// L * A * R == diagonal embedding of diag. Exact check, used by tests.
inline bool smith_reconstructs(const SparseIntMatrix& a, const SmithForm& s) {
    if (!s.left || !s.right) return false;
    const SparseIntMatrix& l = *s.left;
    const SparseIntMatrix& r = *s.right;
    // compute l*a*r sparsely
    SparseIntMatrix la(l.rows(), a.cols());
    for (const auto& [rc, v] : l.entries())
        for (const auto& [ac, av] : a.entries())
            if (ac.first == rc.second) la.add(rc.first, ac.second, v * av);
    SparseIntMatrix lar(la.rows(), r.cols());
    for (const auto& [rc, v] : la.entries())
        for (const auto& [rrc, rv] : r.entries())
            if (rrc.first == rc.second) lar.add(rc.first, rrc.second, v * rv);
    SparseIntMatrix expect(a.rows(), a.cols());
    for (size_t i = 0; i < s.diag.size(); ++i) expect.set(static_cast<int>(i), static_cast<int>(i), s.diag[i]);
    return lar == expect;
}

// Quotient of Z^rows by the integer span of the columns.
struct PresentedAbelianGroup {
    int generators = 0;
    std::shared_ptr<const SparseIntMatrix> relations;
    long free_rank = 0;
    std::vector<Int> torsion;  // > 1, divisibility-ordered

    bool operator==(const PresentedAbelianGroup& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }

    std::string invariant_string() const {
        std::string s = "Z^" + std::to_string(free_rank);
        for (const Int& t : torsion) s += " + Z/" + t.str();
        return s;
    }
};

inline PresentedAbelianGroup cokernel(const SparseIntMatrix& m) {
    SmithForm s = smith_normal_form(m, false);
    PresentedAbelianGroup g;
    g.generators = m.rows();
    g.relations = std::make_shared<SparseIntMatrix>(m);
    g.free_rank = m.rows() - s.rank();
    for (const Int& d : s.diag)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

inline bool groups_isomorphic(const PresentedAbelianGroup& a, const PresentedAbelianGroup& b) {
    return a == b;
}

struct MembershipResult {
    bool member = false;
    std::vector<Int> certificate;  // x with m*x == v, when member
};

// Decides membership of vectors in the column lattice of a fixed matrix.
// Keeps the Smith transforms so repeated queries are cheap.
class LatticeSolver {
  public:
    explicit LatticeSolver(SparseIntMatrix m) : m_(std::move(m)), snf_(smith_normal_form(m_, true)) {}

    const SparseIntMatrix& matrix() const { return m_; }

    MembershipResult contains(const std::vector<Int>& v) const {
        if (static_cast<int>(v.size()) != m_.rows()) throw std::invalid_argument("vector length does not match matrix rows");
        // y = L * v must be divisible by diag and zero past the rank
        std::vector<Int> y(m_.rows(), 0);
        for (const auto& [rc, lv] : snf_.left->entries()) y[rc.first] += lv * v[rc.second];
        long r = snf_.rank();
        for (int i = 0; i < m_.rows(); ++i) {
            if (i < r) {
                if (y[i] % snf_.diag[i] != 0) return {};
            } else if (y[i] != 0) {
                return {};
            }
        }
        MembershipResult res;
        res.member = true;
        res.certificate.assign(m_.cols(), 0);
        if (m_.cols() == 0) return res;
        // x = R * (y_i / d_i), supported on the first r coordinates
        for (const auto& [rc, rv] : snf_.right->entries()) {
            if (rc.second >= r) continue;
            res.certificate[rc.first] += rv * (y[rc.second] / snf_.diag[rc.second]);
        }
        return res;
    }

  private:
    SparseIntMatrix m_;
    SmithForm snf_;
};

inline MembershipResult lattice_membership(const std::vector<Int>& v, const SparseIntMatrix& m) {
    LatticeSolver solver(m);
    return solver.contains(v);
}

// Result of the kernel-oriented column reduction: the rank, the locked pivot
// columns (spanning the column lattice), and the image of an integer kernel
// basis under a projection matrix applied on the left.
struct ColumnReduction {
    long rank = 0;
    SparseIntMatrix pivot_columns;
    SparseIntMatrix projected_kernel;
};

// Unimodular column reduction of a (typically very wide) sparse matrix given
// by columns. Rows are swept in order; for each row the active columns
// meeting it are combined by a Euclidean scheme until one pivot remains.
// Column operations are mirrored on projection-sized shadow columns, so the
// final zero columns deliver proj * (kernel basis) without ever storing the
// full right transform.
class ColumnReducer {
  public:
    using Col = std::vector<std::pair<int, Int>>;  // sorted by row

    ColumnReducer(int rows, std::vector<Col> cols, std::vector<Col> shadows)
        : rows_(rows), cols_(std::move(cols)), shadows_(std::move(shadows)) {
        if (!shadows_.empty() && shadows_.size() != cols_.size())
            throw std::invalid_argument("shadow column count mismatch");
    }

    ColumnReduction run(int shadow_rows) {
        size_t n = cols_.size();
        std::vector<std::vector<int>> bucket(rows_ + 1);
        std::vector<int> state(n, 0);  // 0 active, 1 locked, 2 kernel
        std::vector<int> kernel_order;
        for (size_t j = 0; j < n; ++j) {
            if (cols_[j].empty()) {
                state[j] = 2;
                kernel_order.push_back(static_cast<int>(j));
            } else {
                bucket[cols_[j].front().first].push_back(static_cast<int>(j));
            }
        }
        std::vector<int> locked;
        for (int i = 0; i < rows_; ++i) {
            std::vector<int> live;
            for (int j : bucket[i]) {
                if (state[j] != 0) continue;
                if (cols_[j].empty()) {
                    state[j] = 2;
                    kernel_order.push_back(j);
                    continue;
                }
                if (cols_[j].front().first == i) live.push_back(j);
            }
            if (live.empty()) continue;
            while (live.size() > 1) {
                size_t piv_at = 0;
                for (size_t t = 1; t < live.size(); ++t) {
                    Int a = abs_lead(live[t]), b = abs_lead(live[piv_at]);
                    if (a < b || (a == b && cols_[live[t]].size() < cols_[live[piv_at]].size()))
                        piv_at = t;
                }
                int piv = live[piv_at];
                std::vector<int> next;
                for (size_t t = 0; t < live.size(); ++t) {
                    int j = live[t];
                    if (j == piv) continue;
                    Int q = round_div(cols_[j].front().second, cols_[piv].front().second);
                    axpy(j, piv, q);
                    if (cols_[j].empty()) {
                        state[j] = 2;
                        kernel_order.push_back(j);
                    } else if (cols_[j].front().first == i) {
                        next.push_back(j);
                    } else {
                        bucket[cols_[j].front().first].push_back(j);
                    }
                }
                next.push_back(piv);
                live = std::move(next);
            }
            state[live[0]] = 1;
            locked.push_back(live[0]);
        }
        ColumnReduction out;
        out.rank = static_cast<long>(locked.size());
        out.pivot_columns = SparseIntMatrix(rows_, static_cast<int>(locked.size()));
        for (size_t t = 0; t < locked.size(); ++t)
            for (const auto& [r, v] : cols_[locked[t]]) out.pivot_columns.set(r, static_cast<int>(t), v);
        out.projected_kernel = SparseIntMatrix(shadow_rows, static_cast<int>(kernel_order.size()));
        if (!shadows_.empty())
            for (size_t t = 0; t < kernel_order.size(); ++t)
                for (const auto& [r, v] : shadows_[kernel_order[t]])
                    out.projected_kernel.set(r, static_cast<int>(t), v);
        return out;
    }

  private:
    Int abs_lead(int j) const { return abs_int(cols_[j].front().second); }

    // col_j -= q * col_piv on the matrix and the shadow
    void axpy(int j, int piv, const Int& q) {
        if (q == 0) return;
        cols_[j] = combine(cols_[j], cols_[piv], q);
        if (!shadows_.empty()) shadows_[j] = combine(shadows_[j], shadows_[piv], q);
    }

    static Col combine(const Col& a, const Col& b, const Int& q) {
        Col out;
        out.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                Int v = -q * b[j].second;
                if (v != 0) out.emplace_back(b[j].first, std::move(v));
                ++j;
            } else {
                Int v = a[i].second - q * b[j].second;
                if (v != 0) out.emplace_back(a[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return out;
    }

    int rows_;
    std::vector<Col> cols_;
    std::vector<Col> shadows_;
};

// Incremental integer column Hermite basis of a lattice spanned by a stream
// of columns. Each incoming column is reduced against the pivot columns at
// its leading rows; pivots with small leads keep the fill and the entries
// under control, which column-sweep reduction does not on presentation-style
// matrices.
class HnfLattice {
  public:
    using Col = ColumnReducer::Col;

    explicit HnfLattice(int rows) : rows_(rows) {}

    void insert(Col c) {
        while (!c.empty()) {
            int r = c.front().first;
            auto it = pivots_.find(r);
            if (it == pivots_.end()) {
                if (c.front().second < 0) negate(c);
                register_pivot(r, std::move(c));
                return;
            }
            Col& b = it->second;
            for (;;) {
                Int q = round_div(c.front().second, b.front().second);
                c = combine(c, b, q);
                if (c.empty() || c.front().first != r) break;
                // remainder strictly smaller: swap roles and continue
                unindex(r, b);
                std::swap(c, b);
                if (b.front().second < 0) negate(b);
                reindex(r, b);
            }
        }
    }

    long rank() const { return static_cast<long>(pivots_.size()); }

    SparseIntMatrix basis() const {
        SparseIntMatrix m(rows_, static_cast<int>(pivots_.size()));
        int j = 0;
        for (const auto& [r, col] : pivots_) {
            for (const auto& [row, v] : col) m.set(row, j, v);
            ++j;
        }
        return m;
    }

  private:
    static void negate(Col& c) {
        for (auto& [r, v] : c) v = -v;
    }

    static Col combine(const Col& a, const Col& b, const Int& q) {
        if (q == 0) return a;
        Col out;
        out.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
                out.push_back(a[i++]);
            } else if (i == a.size() || b[j].first < a[i].first) {
                Int v = -q * b[j].second;
                if (v != 0) out.emplace_back(b[j].first, std::move(v));
                ++j;
            } else {
                Int v = a[i].second - q * b[j].second;
                if (v != 0) out.emplace_back(a[i].first, std::move(v));
                ++i;
                ++j;
            }
        }
        return out;
    }

    void unindex(int pr, const Col& c) {
        for (const auto& [row, v] : c) row_index_[row].erase(pr);
    }
    void reindex(int pr, const Col& c) {
        for (const auto& [row, v] : c) row_index_[row].insert(pr);
    }

    void register_pivot(int r, Col c) {
        reindex(r, c);
        pivots_.emplace(r, std::move(c));
        // shrink the entries other pivots carry at this row
        auto touching = row_index_[r];
        const Col& fresh = pivots_.at(r);
        for (int pid : touching) {
            if (pid == r) continue;
            Col& other = pivots_.at(pid);
            Int at = 0;
            for (const auto& [row, v] : other)
                if (row == r) {
                    at = v;
                    break;
                }
            Int q = round_div(at, fresh.front().second);
            if (q == 0) continue;
            unindex(pid, other);
            other = combine(other, fresh, q);
            reindex(pid, other);
        }
    }

    int rows_;
    std::map<int, Col> pivots_;
    std::map<int, std::set<int>> row_index_;
};

}  // namespace mwkit
