#pragma once

// General-position chain complexes over F_p: tuples of vectors in W + V
// whose V-components are in general position, the simplicial boundary, the
// partial homotopy operator, and the SL_n-orbit normalization of
// (n+1)-tuples used to pass to coinvariants.

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwkit/bigint.hpp"
#include "mwkit/field.hpp"

namespace mwkit {

using FpVector = std::vector<uint8_t>;

namespace fp {

inline uint32_t addm(uint32_t a, uint32_t b, uint32_t p) { return (a + b) % p; }
inline uint32_t mulm(uint32_t a, uint32_t b, uint32_t p) { return a * b % p; }

// rank of a list of vectors over F_p (destructive Gaussian elimination)
inline int rank(std::vector<FpVector> rows, uint32_t p) {
    size_t nr = rows.size();
    if (nr == 0) return 0;
    size_t nc = rows[0].size();
    int r = 0;
    for (size_t c = 0; c < nc && r < static_cast<int>(nr); ++c) {
        int piv = -1;
        for (size_t i = r; i < nr; ++i)
            if (rows[i][c] != 0) {
                piv = static_cast<int>(i);
                break;
            }
        if (piv < 0) continue;
        std::swap(rows[r], rows[piv]);
        uint32_t inv = static_cast<uint32_t>(inv_mod(rows[r][c], p));
        for (size_t i = 0; i < nr; ++i) {
            if (static_cast<int>(i) == r || rows[i][c] == 0) continue;
            uint32_t f = mulm(rows[i][c], inv, p);
            for (size_t k = c; k < nc; ++k)
                rows[i][k] = static_cast<uint8_t>((rows[i][k] + p - mulm(f, rows[r][k], p)) % p);
        }
        ++r;
    }
    return r;
}

// determinant of a square matrix given by columns
inline uint32_t det_columns(const std::vector<FpVector>& cols, uint32_t p) {
    size_t n = cols.size();
    std::vector<FpVector> m(n, FpVector(n));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) m[i][j] = cols[j][i];
    uint64_t det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = det * (p - 1) % p;
        }
        det = det * m[c][c] % p;
        uint64_t inv = inv_mod(m[c][c], p);
        for (size_t i = c + 1; i < n; ++i) {
            if (m[i][c] == 0) continue;
            uint64_t f = m[i][c] * inv % p;
            for (size_t k = c; k < n; ++k)
                m[i][k] = static_cast<uint8_t>((m[i][k] + p * p - f * m[c][k] % p) % p);
        }
    }
    return static_cast<uint32_t>(det);
}

// inverse of a square matrix given by columns; empty result when singular
inline std::vector<FpVector> invert_columns(const std::vector<FpVector>& cols, uint32_t p) {
    size_t n = cols.size();
    std::vector<std::vector<uint32_t>> m(n, std::vector<uint32_t>(2 * n, 0));
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) m[i][j] = cols[j][i];
    for (size_t i = 0; i < n; ++i) m[i][n + i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = c;
        while (piv < n && m[piv][c] == 0) ++piv;
        if (piv == n) return {};
        std::swap(m[piv], m[c]);
        uint64_t inv = inv_mod(m[c][c], p);
        for (size_t k = 0; k < 2 * n; ++k) m[c][k] = static_cast<uint32_t>(m[c][k] * inv % p);
        for (size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            uint64_t f = m[i][c];
            for (size_t k = 0; k < 2 * n; ++k)
                m[i][k] = static_cast<uint32_t>((m[i][k] + p * p - f * m[c][k] % p) % p);
        }
    }
    std::vector<FpVector> out(n, FpVector(n));  // columns of the inverse
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < n; ++i) out[j][i] = static_cast<uint8_t>(m[i][n + j]);
    return out;
}

inline FpVector apply_columns(const std::vector<FpVector>& cols, const FpVector& x, uint32_t p) {
    size_t n = cols.size();
    FpVector y(cols.empty() ? 0 : cols[0].size(), 0);
    for (size_t j = 0; j < n; ++j)
        for (size_t i = 0; i < y.size(); ++i)
            y[i] = static_cast<uint8_t>((y[i] + static_cast<uint32_t>(cols[j][i]) * x[j]) % p);
    return y;
}

}  // namespace fp

// Ordered tuple of vectors in W + V with the V-components in general
// position; dim_w leading coordinates belong to W.
struct GPTuple {
    uint32_t p = 3;
    int dim_w = 0;
    std::vector<FpVector> vecs;

    int dim_total() const { return vecs.empty() ? 0 : static_cast<int>(vecs[0].size()); }
    int dim_v() const { return dim_total() - dim_w; }
    size_t len() const { return vecs.size(); }

    FpVector vpart(size_t i) const {
        return FpVector(vecs[i].begin() + dim_w, vecs[i].end());
    }

    auto key() const { return std::tie(p, dim_w, vecs); }
    bool operator<(const GPTuple& o) const { return key() < o.key(); }
    bool operator==(const GPTuple& o) const { return key() == o.key(); }

    std::string to_string() const {
        std::ostringstream os;
        os << "(";
        for (size_t i = 0; i < vecs.size(); ++i) {
            os << (i ? "," : "") << "[";
            for (size_t j = 0; j < vecs[i].size(); ++j) os << (j ? " " : "") << static_cast<int>(vecs[i][j]);
            os << "]";
        }
        os << ")";
        return os.str();
    }
};

// every subset of size min(q, n) of the vectors is linearly independent
inline bool general_position(const std::vector<FpVector>& vs, uint32_t p, int n) {
    int q = static_cast<int>(vs.size());
    int k = std::min(q, n);
    if (k == 0) return true;
    // enumerate k-subsets
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        std::vector<FpVector> sub;
        for (int i : idx) sub.push_back(vs[i]);
        if (fp::rank(sub, p) != k) return false;
        int i = k - 1;
        while (i >= 0 && idx[i] == q - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return true;
}

inline bool tuple_valid(const GPTuple& t) {
    std::vector<FpVector> vs;
    for (size_t i = 0; i < t.len(); ++i) vs.push_back(t.vpart(i));
    return general_position(vs, t.p, t.dim_v());
}

inline GPTuple make_tuple(uint32_t p, int dim_w, std::vector<FpVector> vecs) {
    GPTuple t{p, dim_w, std::move(vecs)};
    if (!tuple_valid(t)) throw std::invalid_argument("tuple not in general position: " + t.to_string());
    return t;
}

// Finitely supported integer combination of tuples of one fixed length.
struct Chain {
    uint32_t p = 3;
    int dim_w = 0;
    int dim = 0;  // total dimension of W + V
    int len = 0;
    std::map<GPTuple, Int> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const Chain& o) const {
        return p == o.p && dim_w == o.dim_w && dim == o.dim && len == o.len && terms == o.terms;
    }
};

inline Chain chain_zero(uint32_t p, int dim_w, int dim, int len) { return Chain{p, dim_w, dim, len, {}}; }

inline void chain_accumulate(Chain& c, const GPTuple& t, const Int& v) {
    if (v == 0) return;
    auto it = c.terms.find(t);
    if (it == c.terms.end()) {
        c.terms.emplace(t, v);
    } else {
        it->second += v;
        if (it->second == 0) c.terms.erase(it);
    }
}

inline Chain chain_of(const GPTuple& t) {
    Chain c{t.p, t.dim_w, t.dim_total(), static_cast<int>(t.len()), {}};
    c.terms[t] = 1;
    return c;
}

inline Chain chain_add(const Chain& a, const Chain& b) {
    if (a.p != b.p || a.dim != b.dim || a.dim_w != b.dim_w || a.len != b.len)
        throw std::invalid_argument("chain shape mismatch");
    Chain c = a;
    for (const auto& [t, v] : b.terms) chain_accumulate(c, t, v);
    return c;
}

inline Chain chain_scale(const Chain& a, const Int& n) {
    Chain c = chain_zero(a.p, a.dim_w, a.dim, a.len);
    if (n == 0) return c;
    for (const auto& [t, v] : a.terms) c.terms[t] = v * n;
    return c;
}

// Simplicial boundary: alternating sum over deleted entries. C_0 = 0.
inline Chain boundary(const Chain& c) {
    if (c.len < 1) throw std::invalid_argument("boundary needs tuples of length >= 1");
    Chain out = chain_zero(c.p, c.dim_w, c.dim, c.len - 1);
    if (c.len == 1) return out;
    for (const auto& [t, v] : c.terms) {
        for (size_t i = 0; i < t.len(); ++i) {
            GPTuple face{t.p, t.dim_w, {}};
            for (size_t j = 0; j < t.len(); ++j)
                if (j != i) face.vecs.push_back(t.vecs[j]);
            chain_accumulate(out, face, (i % 2 == 0) ? v : -v);
        }
    }
    return out;
}

// Partial homotopy operator s_v: append (0, v); demands v in general
// position with every support tuple.
inline Chain homotopy(const Chain& c, const FpVector& v) {
    if (static_cast<int>(v.size()) != c.dim - c.dim_w) throw std::invalid_argument("homotopy vector dimension mismatch");
    Chain out = chain_zero(c.p, c.dim_w, c.dim, c.len + 1);
    FpVector appended(c.dim, 0);
    for (int i = 0; i < c.dim - c.dim_w; ++i) appended[c.dim_w + i] = v[i];
    for (const auto& [t, coeff] : c.terms) {
        GPTuple e = t;
        e.vecs.push_back(appended);
        if (!tuple_valid(e))
            throw std::invalid_argument("homotopy vector not in general position with " + t.to_string());
        out.terms[e] = coeff;
    }
    return out;
}

// Orbit data of an (n+1)-tuple in F_p^n: d(x) represents <det A> [[w]] with
// A the matrix of the first n vectors and w = A^{-1} v.
struct OrbitNormal {
    uint32_t det = 1;
    FpVector w;
};

inline OrbitNormal orbit_normalize(const GPTuple& t, bool certify = false) {
    if (t.dim_w != 0) throw std::invalid_argument("orbit normalization is for W = 0 tuples");
    int n = t.dim_total();
    if (static_cast<int>(t.len()) != n + 1) throw std::invalid_argument("orbit normalization needs an (n+1)-tuple");
    std::vector<FpVector> a(t.vecs.begin(), t.vecs.end() - 1);
    auto ainv = fp::invert_columns(a, t.p);
    if (ainv.empty()) throw std::invalid_argument("leading block singular in " + t.to_string());
    OrbitNormal res;
    res.det = fp::det_columns(a, t.p);
    res.w = fp::apply_columns(ainv, t.vecs.back(), t.p);
    if (certify) {
        // B = A' A^{-1} with A' = diag(1,...,1,det) lies in SL_n and carries
        // the tuple to (e_1,...,e_{n-1}, det e_n, A' w)
        std::vector<FpVector> b = ainv;
        for (int j = 0; j < n; ++j) b[j][n - 1] = static_cast<uint8_t>(static_cast<uint32_t>(b[j][n - 1]) * res.det % t.p);
        if (fp::det_columns(b, t.p) != 1) throw std::logic_error("orbit certificate is not special linear");
        for (int i = 0; i <= n; ++i) {
            FpVector img = fp::apply_columns(b, t.vecs[i], t.p);
            FpVector expect(n, 0);
            if (i < n - 1) {
                expect[i] = 1;
            } else if (i == n - 1) {
                expect[n - 1] = static_cast<uint8_t>(res.det);
            } else {
                expect = res.w;
                expect[n - 1] = static_cast<uint8_t>(static_cast<uint32_t>(res.w[n - 1]) * res.det % t.p);
            }
            if (img != expect) throw std::logic_error("orbit certificate mismatch on " + t.to_string());
        }
    }
    return res;
}

// All tuples of length q in general position inside F_p^n, lexicographic.
inline std::vector<GPTuple> enumerate_tuples(uint32_t p, int n, int q, size_t budget = 0) {
    std::vector<GPTuple> out;
    std::vector<FpVector> cur;
    std::vector<FpVector> all;
    FpVector v(n, 0);
    for (;;) {  // enumerate all nonzero vectors lexicographically
        int i = n - 1;
        while (i >= 0 && v[i] == p - 1) v[i--] = 0;
        if (i < 0) break;
        ++v[i];
        all.push_back(v);
    }
    std::function<void(int)> rec = [&](int depth) {
        if (depth == q) {
            out.push_back(GPTuple{p, 0, cur});
            if (budget && out.size() > budget) throw BudgetError("tuple enumeration budget exceeded");
            return;
        }
        for (const auto& cand : all) {
            cur.push_back(cand);
            if (general_position(cur, p, n))
                rec(depth + 1);
            cur.pop_back();
        }
    };
    rec(0);
    return out;
}

}  // namespace mwkit
