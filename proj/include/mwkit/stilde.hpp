#pragma once

// Models of the module S~(F^n): formal Z[F^x]-combinations of the
// generators [[a_1,...,a_n]], the defining relation family, the determinant
// map D_n and the symbol map T_n, the * product (closed formula and
// chain-level evaluation), the [[-,-]] correction elements, a free symbol
// algebra with its projection to Z[F^x][x], and the decomposability tests.
//
// Over F_p the presented model resolves the relations to a finitely
// presented abelian group (restriction of scalars); the direct model
// computes coinvariants of im d_{n+1} from a full enumeration kernel.

#include <functional>
#include <memory>
#include <set>

#include "mwkit/gp_complex.hpp"
#include "mwkit/intmatrix.hpp"
#include "mwkit/mw_identities.hpp"

namespace mwkit {

// x - y in the field, as a unit; the difference must be nonzero
inline UnitRep unit_diff(const UnitRep& x, const UnitRep& y) {
    require_same_field(x.field, y.field);
    if (x == y) throw std::invalid_argument("vanishing difference of units");
    if (x.field.is_q()) {
        auto [nx, dx] = unit_rational(x);
        auto [ny, dy] = unit_rational(y);
        return make_unit_q(nx * dy - ny * dx, dx * dy);
    }
    return make_unit_fp(x.field, Int(x.residue) + Int(x.field.p) - Int(y.residue));
}

inline UnitRep sign_unit(const FieldSpec& f, int s) { return s >= 0 ? unit_one(f) : unit_minus_one(f); }

// ---------------------------------------------------------------------------
// formal combinations of generators
// ---------------------------------------------------------------------------

struct StildeElem {
    FieldSpec field;
    int n = 1;  // generator arity
    std::map<std::vector<UnitRep>, GroupRingElem> terms;

    bool is_formally_zero() const { return terms.empty(); }
};

inline StildeElem stilde_zero(const FieldSpec& f, int n) { return StildeElem{f, n, {}}; }

inline StildeElem stilde_gen(const std::vector<UnitRep>& units) {
    if (units.empty()) throw std::invalid_argument("generator needs arity >= 1");
    StildeElem e{units.front().field, static_cast<int>(units.size()), {}};
    e.terms[units] = gr_one(e.field);
    return e;
}

inline void stilde_accumulate(StildeElem& e, const std::vector<UnitRep>& g, const GroupRingElem& c) {
    if (c.is_zero()) return;
    auto it = e.terms.find(g);
    if (it == e.terms.end()) {
        e.terms.emplace(g, c);
    } else {
        it->second = gr_add(it->second, c);
        if (it->second.is_zero()) e.terms.erase(it);
    }
}

inline StildeElem stilde_add(const StildeElem& a, const StildeElem& b) {
    require_same_field(a.field, b.field);
    if (a.n != b.n) throw std::invalid_argument("generator arity mismatch");
    StildeElem e = a;
    for (const auto& [g, c] : b.terms) stilde_accumulate(e, g, c);
    return e;
}

inline StildeElem stilde_scale(const StildeElem& a, const GroupRingElem& c) {
    StildeElem e = stilde_zero(a.field, a.n);
    for (const auto& [g, coeff] : a.terms) stilde_accumulate(e, g, gr_mul(c, coeff));
    return e;
}

inline StildeElem stilde_scale_int(const StildeElem& a, const Int& k) {
    return stilde_scale(a, gr_int(a.field, k));
}

inline StildeElem stilde_sub(const StildeElem& a, const StildeElem& b) {
    return stilde_add(a, stilde_scale_int(b, -1));
}

// The defining relation: [[b.a]] - [[a]] - sum_i (-1)^{n+i} <(-1)^{n+i} a_i>
// [[a_1(b_1-b_i),...,^,...,a_n(b_n-b_i),b_i]], for distinct b_i.
inline StildeElem stilde_relation(const std::vector<UnitRep>& a, const std::vector<UnitRep>& b) {
    int n = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("relation tuple length mismatch");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (b[i] == b[j]) throw std::invalid_argument("relation needs distinct b_i");
    const FieldSpec& f = a.front().field;
    std::vector<UnitRep> ba;
    for (int i = 0; i < n; ++i) ba.push_back(unit_mul(b[i], a[i]));
    StildeElem r = stilde_sub(stilde_gen(ba), stilde_gen(a));
    for (int i = 0; i < n; ++i) {
        std::vector<UnitRep> w;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w.push_back(unit_mul(a[j], unit_diff(b[j], b[i])));
        }
        w.push_back(b[i]);
        int sgn = ((n + i + 1) % 2 == 0) ? 1 : -1;  // (-1)^{n+i}, i one-based
        GroupRingElem coeff = gr_scale(gr_basis(unit_mul(sign_unit(f, sgn), a[i])), Int(sgn));
        r = stilde_sub(r, stilde_scale(stilde_gen(w), coeff));
    }
    return r;
}

// ---------------------------------------------------------------------------
// D and T
// ---------------------------------------------------------------------------

// D_n [[a_1..a_n]] = sum_i (-1)^{i+1} <(-1)^{n-i} a_i> + (-1)^n <1>
inline GroupRingElem stilde_D_gen(const std::vector<UnitRep>& units) {
    const FieldSpec& f = units.front().field;
    int n = static_cast<int>(units.size());
    GroupRingElem d = gr_zero(f);
    for (int i = 1; i <= n; ++i) {
        int s1 = (i % 2 == 1) ? 1 : -1;
        int s2 = ((n - i) % 2 == 0) ? 1 : -1;
        d = gr_add(d, gr_scale(gr_basis(unit_mul(sign_unit(f, s2), units[i - 1])), Int(s1)));
    }
    d = gr_add(d, gr_scale(gr_one(f), Int(n % 2 == 0 ? 1 : -1)));
    return d;
}

inline GroupRingElem stilde_D(const StildeElem& e) {
    GroupRingElem d = gr_zero(e.field);
    for (const auto& [g, c] : e.terms) d = gr_add(d, gr_mul(c, stilde_D_gen(g)));
    return d;
}

// T_n [[a_1..a_n]] = [a_1]...[a_n]; Z[F^x]-coefficients act through GW
inline MWClass stilde_T(const StildeElem& e) {
    if (!e.field.is_q()) throw std::invalid_argument("T is computed over Q");
    MWClass acc = mwk_zero(e.field, e.n);
    for (const auto& [g, c] : e.terms) {
        MWClass base = mwk_normalize(mw_word(e.field, g));
        for (const auto& [u, k] : c.terms)
            acc = mwk_add(acc, mwk_scale(gw_act(gw_basis_class(u), base), k));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// the * product
// ---------------------------------------------------------------------------

namespace detail_star {

inline std::vector<UnitRep> default_aux(const FieldSpec& f, int n) {
    if (!f.is_q() && static_cast<int>(f.p) <= n)
        throw SamplingError("not enough units in F_" + std::to_string(f.p) + " for the product formula");
    std::vector<UnitRep> b;
    for (int i = 1; i <= n; ++i) b.push_back(make_unit(f, i));
    return b;
}

// the deleted-slot word A_i = (a_1(b_1-b_i),...,^,...,a_n(b_n-b_i), b_i)
inline std::vector<UnitRep> slot_word(const std::vector<UnitRep>& a, const std::vector<UnitRep>& b, int i) {
    std::vector<UnitRep> w;
    for (size_t j = 0; j < a.size(); ++j) {
        if (static_cast<int>(j) == i) continue;
        w.push_back(unit_mul(a[j], unit_diff(b[j], b[i])));
    }
    w.push_back(b[i]);
    return w;
}

}  // namespace detail_star

// Closed product formula with auxiliary constants b_i = i, b'_j = j.
inline StildeElem star_gens_formula(const std::vector<UnitRep>& a, const std::vector<UnitRep>& ap) {
    const FieldSpec& f = a.front().field;
    int n = static_cast<int>(a.size()), m = static_cast<int>(ap.size());
    auto b = detail_star::default_aux(f, n);
    auto bp = detail_star::default_aux(f, m);
    std::vector<UnitRep> ba, bap;
    for (int i = 0; i < n; ++i) ba.push_back(unit_mul(b[i], a[i]));
    for (int j = 0; j < m; ++j) bap.push_back(unit_mul(bp[j], ap[j]));
    auto concat = [](std::vector<UnitRep> x, const std::vector<UnitRep>& y) {
        x.insert(x.end(), y.begin(), y.end());
        return x;
    };
    StildeElem out = stilde_zero(f, n + m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            int sgn = ((m + n + i + j) % 2 == 0) ? 1 : -1;
            int inner = ((i + j) % 2 == 0) ? 1 : -1;
            UnitRep u = unit_mul(sign_unit(f, inner), unit_mul(a[i], ap[j]));
            GroupRingElem c = gr_scale(gr_basis(u), Int(sgn));
            out = stilde_add(out, stilde_scale(
                                      stilde_gen(concat(detail_star::slot_word(a, b, i),
                                                        detail_star::slot_word(ap, bp, j))),
                                      c));
        }
    for (int i = 0; i < n; ++i) {
        int inner = (i % 2 == 0) ? 1 : -1;  // (-1)^{i+1} with i one-based
        UnitRep u = unit_mul(sign_unit(f, inner), a[i]);
        GroupRingElem c = gr_scale(gr_basis(u), Int(((n % 2 == 0) ? 1 : -1) * inner));
        out = stilde_add(out,
                         stilde_scale(stilde_gen(concat(detail_star::slot_word(a, b, i), bap)), c));
    }
    for (int j = 0; j < m; ++j) {
        int inner = (j % 2 == 0) ? 1 : -1;
        UnitRep u = unit_mul(sign_unit(f, inner), ap[j]);
        GroupRingElem c = gr_scale(gr_basis(u), Int(((m % 2 == 0) ? 1 : -1) * inner));
        out = stilde_add(out,
                         stilde_scale(stilde_gen(concat(ba, detail_star::slot_word(ap, bp, j))), c));
    }
    out = stilde_add(out, stilde_gen(concat(ba, bap)));
    return out;
}

inline StildeElem star_formula(const StildeElem& x, const StildeElem& y) {
    require_same_field(x.field, y.field);
    StildeElem out = stilde_zero(x.field, x.n + y.n);
    for (const auto& [gx, cx] : x.terms)
        for (const auto& [gy, cy] : y.terms)
            out = stilde_add(out, stilde_scale(star_gens_formula(gx, gy), gr_mul(cx, cy)));
    return out;
}

// Chain-level evaluation over F_p: concatenate the boundary cycles of the
// two generators in complementary blocks, contract with the first homotopy
// vector in lexicographic order, and read the class off through the orbit
// normalization.
inline StildeElem star_chain(const StildeElem& x, const StildeElem& y) {
    if (x.field.is_q()) throw std::invalid_argument("chain-level product needs a finite field");
    uint32_t p = x.field.p;
    int n = x.n, m = y.n, dim = n + m;
    StildeElem out = stilde_zero(x.field, dim);
    for (const auto& [gx, cx] : x.terms)
        for (const auto& [gy, cy] : y.terms) {
            // boundary cycles of the generator tuples in their own blocks
            auto block_cycle = [&](const std::vector<UnitRep>& g, int offset, int bdim) {
                std::vector<FpVector> vecs;
                for (int i = 0; i < bdim; ++i) {
                    FpVector e(bdim, 0);
                    e[i] = 1;
                    vecs.push_back(e);
                }
                FpVector a(bdim, 0);
                for (int i = 0; i < bdim; ++i) a[i] = static_cast<uint8_t>(g[i].residue);
                vecs.push_back(a);
                return boundary(chain_of(make_tuple(p, 0, vecs)));
            };
            Chain zx = block_cycle(gx, 0, n);
            Chain zy = block_cycle(gy, n, m);
            // concatenated product cycle in F_p^{n+m}
            Chain z = chain_zero(p, 0, dim, dim);
            auto embed = [&](const FpVector& v, int offset) {
                FpVector w(dim, 0);
                for (size_t i = 0; i < v.size(); ++i) w[offset + i] = v[i];
                return w;
            };
            for (const auto& [tx, vx] : zx.terms)
                for (const auto& [ty, vy] : zy.terms) {
                    GPTuple t{p, 0, {}};
                    for (const auto& v : tx.vecs) t.vecs.push_back(embed(v, 0));
                    for (const auto& v : ty.vecs) t.vecs.push_back(embed(v, n));
                    chain_accumulate(z, t, vx * vy);
                }
            // first homotopy vector in lex order that is in general position
            // with the whole support
            FpVector v(dim, 0);
            bool found = false;
            while (!found) {
                int i = dim - 1;
                while (i >= 0 && v[i] == p - 1) v[i--] = 0;
                if (i < 0) throw SamplingError("no homotopy vector available");
                ++v[i];
                found = true;
                for (const auto& [t, coeff] : z.terms) {
                    GPTuple e = t;
                    e.vecs.push_back(v);
                    if (!tuple_valid(e)) {
                        found = false;
                        break;
                    }
                }
            }
            Chain sv = homotopy(z, v);
            // z = d((-1)^dim s_v z); each (dim+1)-tuple represents <det>[[w]]
            int sgn = (dim % 2 == 0) ? 1 : -1;
            for (const auto& [t, coeff] : sv.terms) {
                OrbitNormal o = orbit_normalize(t, true);
                std::vector<UnitRep> w;
                for (uint8_t wi : o.w) w.push_back(make_unit_fp(x.field, Int(wi)));
                GroupRingElem c = gr_mul(gr_mul(cx, cy), gr_basis(make_unit_fp(x.field, Int(o.det))));
                out = stilde_add(out, stilde_scale(stilde_gen(w), gr_scale(c, coeff * sgn)));
            }
        }
    return out;
}

// E = [[-1, 1]]
inline StildeElem stilde_E(const FieldSpec& f) {
    return stilde_gen({unit_minus_one(f), unit_one(f)});
}

// [[a,b]] corrected to the kernel of D_2: [[a]]*[[b]] - <<a>><<b>> E
inline StildeElem ksp(const UnitRep& a, const UnitRep& b) {
    StildeElem prod = star_formula(stilde_gen({a}), stilde_gen({b}));
    GroupRingElem c = gr_mul(gr_pfister_gen(a), gr_pfister_gen(b));
    return stilde_sub(prod, stilde_scale(stilde_E(a.field), c));
}

// [[a_1,...,a_n]] of the Matsumoto-Moore section: products of ksp pairs,
// with a leading [[a_1]] when n is odd.
inline StildeElem ksb(const std::vector<UnitRep>& a) {
    int n = static_cast<int>(a.size());
    if (n < 2) throw std::invalid_argument("ksb needs arity >= 2");
    StildeElem acc = (n % 2 == 0) ? ksp(a[0], a[1]) : star_formula(stilde_gen({a[0]}), ksp(a[1], a[2]));
    for (int i = (n % 2 == 0) ? 2 : 3; i + 1 < n; i += 2) acc = star_formula(acc, ksp(a[i], a[i + 1]));
    return acc;
}

// ---------------------------------------------------------------------------
// presented model over F_p
// ---------------------------------------------------------------------------

namespace detail_model {

// Reduce a wide list of columns to a pivot basis spanning the same lattice.
inline SparseIntMatrix saturate_columns(int rows, std::vector<ColumnReducer::Col> columns) {
    HnfLattice basis(rows);
    for (auto& c : columns) basis.insert(std::move(c));
    return basis.basis();
}

inline PresentedAbelianGroup cokernel_via_reduction(const SparseIntMatrix& m) {
    std::vector<ColumnReducer::Col> cols(m.cols());
    for (const auto& [rc, v] : m.entries()) cols[rc.second].emplace_back(rc.first, v);
    SparseIntMatrix pivots = saturate_columns(m.rows(), std::move(cols));
    SmithForm s = smith_normal_form(pivots, false);
    PresentedAbelianGroup g;
    g.generators = m.rows();
    g.relations = std::make_shared<SparseIntMatrix>(std::move(pivots));
    g.free_rank = m.rows() - s.rank();
    for (const Int& d : s.diag)
        if (d > 1) g.torsion.push_back(d);
    return g;
}

}  // namespace detail_model

// coordinate layout of the restriction of scalars: one Z-coordinate per
// (unit, generator tuple) pair, generators in lexicographic order
class GeneratorIndex {
  public:
    GeneratorIndex(uint32_t p, int n) : p_(p), n_(n), field_(FieldSpec::prime_field(p)) {
        if (static_cast<int>(p) - 1 < n) throw SamplingError("need p-1 >= n distinct units");
        std::vector<uint32_t> cur(n, 1);
        for (;;) {
            gens_.push_back(cur);
            gen_index_[cur] = static_cast<int>(gens_.size()) - 1;
            int i = n - 1;
            while (i >= 0 && cur[i] == p - 1) cur[i--] = 1;
            if (i < 0) break;
            ++cur[i];
        }
    }

    uint32_t p() const { return p_; }
    int n() const { return n_; }
    const FieldSpec& field() const { return field_; }
    int units() const { return static_cast<int>(p_) - 1; }
    int coords() const { return static_cast<int>(gens_.size()) * units(); }
    const std::vector<std::vector<uint32_t>>& generators() const { return gens_; }

    int coord(uint32_t unit, const std::vector<uint32_t>& gen) const {
        auto it = gen_index_.find(gen);
        if (it == gen_index_.end()) throw std::invalid_argument("unknown generator");
        return it->second * units() + static_cast<int>(unit) - 1;
    }

    std::vector<Int> expand(const StildeElem& e) const {
        std::vector<Int> v(coords(), 0);
        for (const auto& [r, k] : expand_sparse(e)) v[r] = k;
        return v;
    }

    std::vector<std::pair<int, Int>> expand_sparse(const StildeElem& e) const {
        if (e.n != n_ || !(e.field == field_)) throw std::invalid_argument("element does not fit the model");
        std::map<int, Int> acc;
        for (const auto& [g, c] : e.terms) {
            std::vector<uint32_t> key;
            for (const auto& u : g) key.push_back(u.residue);
            for (const auto& [u, k] : c.terms) {
                auto [it, fresh] = acc.emplace(coord(u.residue, key), k);
                if (!fresh) it->second += k;
            }
        }
        std::vector<std::pair<int, Int>> out;
        for (const auto& [r, k] : acc)
            if (k != 0) out.emplace_back(r, k);
        return out;
    }

  private:
    uint32_t p_;
    int n_;
    FieldSpec field_;
    std::vector<std::vector<uint32_t>> gens_;
    std::map<std::vector<uint32_t>, int> gen_index_;
};

class StildeModel {
  public:
    StildeModel(uint32_t p, int n) : idx_(p, n) {
        if (n > 3 || p > 13) throw BudgetError("presented model limited to n <= 3, p <= 13");
        assemble();
    }

    uint32_t p() const { return idx_.p(); }
    int n() const { return idx_.n(); }
    const FieldSpec& field() const { return idx_.field(); }
    const GeneratorIndex& index() const { return idx_; }
    int coords() const { return idx_.coords(); }
    long relation_instances() const { return relation_instances_; }
    long relation_columns() const { return relation_columns_; }
    const PresentedAbelianGroup& resolved() const { return resolved_; }

    std::vector<Int> expand(const StildeElem& e) const { return idx_.expand(e); }

    bool is_zero(const StildeElem& e) const { return solver_->contains(idx_.expand(e)).member; }

    bool equal(const StildeElem& a, const StildeElem& b) const { return is_zero(stilde_sub(a, b)); }

    const LatticeSolver& solver() const { return *solver_; }

    // iterate over all relation instances (a, b) with distinct b_i
    void for_each_relation(const std::function<void(const std::vector<UnitRep>&, const std::vector<UnitRep>&)>& f) const {
        std::vector<std::vector<UnitRep>> bs;
        std::vector<UnitRep> units_list;
        for (uint32_t u = 1; u < p(); ++u) units_list.push_back(make_unit_fp(field(), Int(u)));
        std::function<void(std::vector<UnitRep>&)> rec_b = [&](std::vector<UnitRep>& cur) {
            if (static_cast<int>(cur.size()) == n()) {
                bs.push_back(cur);
                return;
            }
            for (const auto& u : units_list) {
                bool dup = false;
                for (const auto& v : cur) dup = dup || v == u;
                if (dup) continue;
                cur.push_back(u);
                rec_b(cur);
                cur.pop_back();
            }
        };
        std::vector<UnitRep> cur;
        rec_b(cur);
        for (const auto& g : idx_.generators()) {
            std::vector<UnitRep> a;
            for (uint32_t r : g) a.push_back(make_unit_fp(field(), Int(r)));
            for (const auto& b : bs) f(a, b);
        }
    }

  private:
    void assemble() {
        std::set<std::vector<std::pair<int, Int>>> dedup;
        std::vector<std::vector<std::pair<int, Int>>> columns;
        long instances = 0;
        for_each_relation([&](const std::vector<UnitRep>& a, const std::vector<UnitRep>& b) {
            ++instances;
            StildeElem r = stilde_relation(a, b);
            for (uint32_t u = 1; u < p(); ++u) {
                StildeElem ru = stilde_scale(r, gr_basis(make_unit_fp(field(), Int(u))));
                auto col = idx_.expand_sparse(ru);
                if (dedup.insert(col).second) columns.push_back(std::move(col));
            }
        });
        relation_instances_ = instances;
        relation_columns_ = instances * idx_.units();
        SparseIntMatrix m(coords(), static_cast<int>(columns.size()));
        for (size_t j = 0; j < columns.size(); ++j)
            for (const auto& [r, v] : columns[j]) m.set(r, static_cast<int>(j), v);
        resolved_ = detail_model::cokernel_via_reduction(m);
        solver_ = std::make_shared<LatticeSolver>(*resolved_.relations);
    }

    GeneratorIndex idx_;
    long relation_instances_ = 0;
    long relation_columns_ = 0;
    PresentedAbelianGroup resolved_;
    std::shared_ptr<LatticeSolver> solver_;
};

inline StildeModel stilde_presented(uint32_t p, int n) { return StildeModel(p, n); }

// ---------------------------------------------------------------------------
// direct model: coinvariants of im d_{n+1} from the enumeration kernel
// ---------------------------------------------------------------------------

struct StildeDirectResult {
    PresentedAbelianGroup group;
    long x_n = 0, x_np1 = 0;
    long rank_dn = 0, rank_dnp1 = 0;
    long hom_free_rank = 0;           // ker d_n / im d_{n+1}, before coinvariants
    std::vector<Int> hom_torsion;
    long kernel_columns = 0;
};

inline StildeDirectResult stilde_direct(uint32_t p, int n) {
    GeneratorIndex idx(p, n);

    auto xq = enumerate_tuples(p, n, n + 1, 600000);
    auto xn = enumerate_tuples(p, n, n, 600000);
    std::map<GPTuple, int> row_of;
    for (size_t i = 0; i < xn.size(); ++i) row_of[xn[i]] = static_cast<int>(i);

    StildeDirectResult res;
    res.x_n = static_cast<long>(xn.size());
    res.x_np1 = static_cast<long>(xq.size());

    // d_{n+1} columns and the coinvariants shadow
    std::vector<ColumnReducer::Col> cols(xq.size()), shadows(xq.size());
    for (size_t j = 0; j < xq.size(); ++j) {
        std::map<int, Int> col;
        for (size_t i = 0; i < xq[j].len(); ++i) {
            GPTuple face{p, 0, {}};
            for (size_t k = 0; k < xq[j].len(); ++k)
                if (k != i) face.vecs.push_back(xq[j].vecs[k]);
            col[row_of.at(face)] += (i % 2 == 0) ? 1 : -1;
        }
        for (const auto& [r, v] : col)
            if (v != 0) cols[j].emplace_back(r, v);
        OrbitNormal o = orbit_normalize(xq[j], true);
        std::vector<uint32_t> gen(o.w.begin(), o.w.end());
        shadows[j].emplace_back(idx.coord(o.det, gen), Int(1));
    }
    ColumnReducer red(static_cast<int>(xn.size()), std::move(cols), std::move(shadows));
    auto reduction = red.run(idx.coords());
    res.rank_dnp1 = reduction.rank;
    res.kernel_columns = reduction.projected_kernel.cols();

    // deduplicate projected kernel columns before resolving
    std::set<std::vector<std::pair<int, Int>>> dedup;
    std::vector<std::vector<std::pair<int, Int>>> kcols(reduction.projected_kernel.cols());
    for (const auto& [rc, v] : reduction.projected_kernel.entries()) kcols[rc.second].emplace_back(rc.first, v);
    std::vector<std::vector<std::pair<int, Int>>> kept;
    for (auto& c : kcols)
        if (!c.empty() && dedup.insert(c).second) kept.push_back(std::move(c));
    SparseIntMatrix kmat(idx.coords(), static_cast<int>(kept.size()));
    for (size_t j = 0; j < kept.size(); ++j)
        for (const auto& [r, v] : kept[j]) kmat.set(r, static_cast<int>(j), v);
    res.group = detail_model::cokernel_via_reduction(kmat);

    // rank of d_n (zero map when n = 1 since C_0 = 0)
    long rank_dn = 0;
    if (n >= 2) {
        auto xm = enumerate_tuples(p, n, n - 1, 600000);
        std::map<GPTuple, int> row_m;
        for (size_t i = 0; i < xm.size(); ++i) row_m[xm[i]] = static_cast<int>(i);
        std::vector<ColumnReducer::Col> dn(xn.size());
        for (size_t j = 0; j < xn.size(); ++j) {
            std::map<int, Int> col;
            for (size_t i = 0; i < xn[j].len(); ++i) {
                GPTuple face{p, 0, {}};
                for (size_t k = 0; k < xn[j].len(); ++k)
                    if (k != i) face.vecs.push_back(xn[j].vecs[k]);
                col[row_m.at(face)] += (i % 2 == 0) ? 1 : -1;
            }
            for (const auto& [r, v] : col)
                if (v != 0) dn[j].emplace_back(r, v);
        }
        ColumnReducer red_n(static_cast<int>(xm.size()), std::move(dn), {});
        rank_dn = red_n.run(0).rank;
    }
    res.rank_dn = rank_dn;
    res.hom_free_rank = (res.x_n - rank_dn) - res.rank_dnp1;
    SmithForm s = smith_normal_form(reduction.pivot_columns, false);
    for (const Int& d : s.diag)
        if (d > 1) res.hom_torsion.push_back(d);
    return res;
}

// ---------------------------------------------------------------------------
// free symbol algebra and the decomposability machinery
// ---------------------------------------------------------------------------

struct FreeSymElem {
    FieldSpec field;
    std::map<std::vector<UnitRep>, GroupRingElem> terms;  // words of any length
};

inline FreeSymElem free_sym_zero(const FieldSpec& f) { return FreeSymElem{f, {}}; }

inline FreeSymElem free_sym_gen(const std::vector<UnitRep>& word) {
    FreeSymElem e{word.front().field, {}};
    e.terms[word] = gr_one(e.field);
    return e;
}

inline FreeSymElem free_sym_add(const FreeSymElem& a, const FreeSymElem& b) {
    FreeSymElem e = a;
    for (const auto& [w, c] : b.terms) {
        auto it = e.terms.find(w);
        if (it == e.terms.end()) {
            e.terms.emplace(w, c);
        } else {
            it->second = gr_add(it->second, c);
            if (it->second.is_zero()) e.terms.erase(it);
        }
    }
    return e;
}

inline FreeSymElem free_sym_scale(const FreeSymElem& a, const GroupRingElem& c) {
    FreeSymElem e = free_sym_zero(a.field);
    for (const auto& [w, k] : a.terms) {
        GroupRingElem v = gr_mul(c, k);
        if (!v.is_zero()) e.terms[w] = v;
    }
    return e;
}

inline FreeSymElem free_sym_sub(const FreeSymElem& a, const FreeSymElem& b) {
    return free_sym_add(a, free_sym_scale(b, gr_int(a.field, -1)));
}

// tensor-algebra product: concatenation of words
inline FreeSymElem free_sym_mul(const FreeSymElem& a, const FreeSymElem& b) {
    FreeSymElem e = free_sym_zero(a.field);
    for (const auto& [wa, ca] : a.terms)
        for (const auto& [wb, cb] : b.terms) {
            std::vector<UnitRep> w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            auto c = gr_mul(ca, cb);
            auto it = e.terms.find(w);
            if (it == e.terms.end())
                e.terms.emplace(w, c);
            else {
                it->second = gr_add(it->second, c);
                if (it->second.is_zero()) e.terms.erase(it);
            }
        }
    return e;
}

// Pi: <a_1,...,a_k>-f -> <a_1...a_k> x^k, a graded algebra map to Z[F^x][x]
using GrPolynomial = std::map<int, GroupRingElem>;

inline GrPolynomial pi_map(const FreeSymElem& e) {
    GrPolynomial out;
    for (const auto& [w, c] : e.terms) {
        UnitRep prod = unit_one(e.field);
        for (const auto& u : w) prod = unit_mul(prod, u);
        int deg = static_cast<int>(w.size());
        GroupRingElem add = gr_mul(c, gr_basis(prod));
        auto it = out.find(deg);
        if (it == out.end())
            out.emplace(deg, add);
        else {
            it->second = gr_add(it->second, add);
            if (it->second.is_zero()) out.erase(it);
        }
    }
    return out;
}

// the free-algebra lift of the defining relation with a_i = 1
inline FreeSymElem free_relation_rb(const FieldSpec& f, const std::vector<UnitRep>& b) {
    int n = static_cast<int>(b.size());
    FreeSymElem r = free_sym_sub(free_sym_gen(b), free_sym_gen(std::vector<UnitRep>(n, unit_one(f))));
    for (int i = 0; i < n; ++i) {
        std::vector<UnitRep> w;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            w.push_back(unit_diff(b[j], b[i]));
        }
        w.push_back(b[i]);
        int sgn = ((n + i + 1) % 2 == 0) ? 1 : -1;
        GroupRingElem c = gr_scale(gr_basis(sign_unit(f, sgn)), Int(sgn));
        r = free_sym_sub(r, free_sym_scale(free_sym_gen(w), c));
    }
    return r;
}

// L(a) = <-1><1-a,1>-f - <a><1-1/a,1/a>-f + <1,1>-f
inline FreeSymElem free_L(const UnitRep& a) {
    const FieldSpec& f = a.field;
    if (a.is_one()) throw std::invalid_argument("L(a) needs a != 1");
    UnitRep inv = unit_inv(a);
    FreeSymElem e = free_sym_scale(free_sym_gen({unit_one_minus(a), unit_one(f)}), gr_basis(unit_minus_one(f)));
    e = free_sym_sub(e, free_sym_scale(free_sym_gen({unit_one_minus(inv), inv}), gr_basis(a)));
    e = free_sym_add(e, free_sym_gen({unit_one(f), unit_one(f)}));
    return e;
}

// p_n: interpret length-n words as generators of S~(F^n)
inline StildeElem p_map(const FreeSymElem& e, int n) {
    StildeElem out = stilde_zero(e.field, n);
    for (const auto& [w, c] : e.terms) {
        if (static_cast<int>(w.size()) != n) throw std::invalid_argument("word length mismatch in p_map");
        stilde_accumulate(out, w, c);
    }
    return out;
}

}  // namespace mwkit
