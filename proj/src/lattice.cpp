#include "klp/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "klp/util.hpp"

namespace klp {

namespace {

mpz_class dot(const IntVec& a, const IntVec& b) {
    mpz_class s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

mpz_class round_quotient(const mpz_class& num, const mpz_class& den) {
    // nearest integer to num/den, den > 0, ties toward +inf
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (2 * r >= den) ++q;
    return q;
}

}  // namespace

ReducedBasis lll_reduce(const Lattice& lat, const mpq_class& lovasz) {
    const int n = lat.dim();
    if (n == 0) throw std::domain_error("lll_reduce: empty basis");
    for (const auto& c : lat.cols)
        if (static_cast<int>(c.size()) != n)
            throw std::domain_error("lll_reduce: basis must be square");
    if (!(lovasz > mpq_class(1, 4) && lovasz < 1))
        throw std::domain_error("lll_reduce: Lovasz constant must lie in (1/4, 1)");

    // Integral LLL: d[i] are the Gram determinants, lam[i][j] = d[j] * mu_ij.
    // All arithmetic stays in integers (1-based indexing as usual).
    std::vector<IntVec> b(lat.cols);
    std::vector<IntVec> u;  // unimodular transform columns
    for (int i = 0; i < n; ++i) {
        IntVec e(static_cast<size_t>(n), mpz_class(0));
        e[static_cast<size_t>(i)] = 1;
        u.push_back(e);
    }
    std::vector<mpz_class> d(static_cast<size_t>(n) + 1);
    std::vector<std::vector<mpz_class>> lam(static_cast<size_t>(n) + 1,
                                            std::vector<mpz_class>(static_cast<size_t>(n) + 1));
    d[0] = 1;

    auto vec_submul = [&](std::vector<IntVec>& vs, int dst, int src, const mpz_class& q) {
        IntVec& vd = vs[static_cast<size_t>(dst)];
        const IntVec& vsrc = vs[static_cast<size_t>(src)];
        for (size_t t = 0; t < vd.size(); ++t) vd[t] -= q * vsrc[t];
    };

    auto red = [&](int kk, int l) {
        if (2 * abs(lam[kk][l]) > d[l]) {
            mpz_class q = round_quotient(lam[kk][l], d[l]);
            vec_submul(b, kk - 1, l - 1, q);
            vec_submul(u, kk - 1, l - 1, q);
            lam[kk][l] -= q * d[l];
            for (int i = 1; i < l; ++i) lam[kk][i] -= q * lam[l][i];
        }
    };

    int kmax = 1;
    d[1] = dot(b[0], b[0]);
    if (d[1] == 0) throw std::domain_error("lll_reduce: zero basis vector");

    const mpz_class lz_num = lovasz.get_num(), lz_den = lovasz.get_den();
    int kk = 2;
    while (kk <= n) {
        if (kk > kmax) {
            kmax = kk;
            for (int j = 1; j <= kk; ++j) {
                mpz_class t = dot(b[static_cast<size_t>(kk - 1)], b[static_cast<size_t>(j - 1)]);
                for (int i = 1; i < j; ++i) t = (d[i] * t - lam[kk][i] * lam[j][i]) / d[i - 1];
                if (j < kk)
                    lam[kk][j] = t;
                else
                    d[kk] = t;
            }
            if (d[kk] == 0) throw std::domain_error("lll_reduce: dependent basis columns");
        }
        while (true) {
            red(kk, kk - 1);
            // Lovasz test: d_k d_(k-2) < (lovasz) d_(k-1)^2 - lam^2 * d_(k-2)/d_(k-1) ...
            // integral form: lz_den * (d_k d_(k-2) + lam^2) < lz_num * d_(k-1)^2
            if (lz_den * (d[kk] * d[kk - 2] + lam[kk][kk - 1] * lam[kk][kk - 1]) <
                lz_num * d[kk - 1] * d[kk - 1]) {
                // swap b_k, b_(k-1) and patch the integral GSO data
                std::swap(b[static_cast<size_t>(kk - 1)], b[static_cast<size_t>(kk - 2)]);
                std::swap(u[static_cast<size_t>(kk - 1)], u[static_cast<size_t>(kk - 2)]);
                for (int j = 1; j <= kk - 2; ++j) std::swap(lam[kk][j], lam[kk - 1][j]);
                mpz_class lmb = lam[kk][kk - 1];
                mpz_class Bv = (d[kk - 2] * d[kk] + lmb * lmb) / d[kk - 1];
                for (int i = kk + 1; i <= kmax; ++i) {
                    mpz_class t = lam[i][kk];
                    lam[i][kk] = (d[kk] * lam[i][kk - 1] - lmb * t) / d[kk - 1];
                    lam[i][kk - 1] = (Bv * t + lmb * lam[i][kk]) / d[kk];
                }
                d[kk - 1] = Bv;
                kk = std::max(2, kk - 1);
            } else {
                for (int l = kk - 2; l >= 1; --l) red(kk, l);
                ++kk;
                break;
            }
        }
    }

    // Exact rational GSO of the final basis for the certificate and the
    // post-hoc reduced-basis checks.
    ReducedBasis out;
    out.cols = b;
    out.transform = u;
    out.mu.assign(static_cast<size_t>(n), std::vector<mpq_class>(static_cast<size_t>(n), mpq_class(0)));
    std::vector<std::vector<mpq_class>> star(static_cast<size_t>(n),
                                             std::vector<mpq_class>(static_cast<size_t>(n)));
    out.gso_norm2.assign(static_cast<size_t>(n), mpq_class(0));
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < n; ++t)
            star[static_cast<size_t>(i)][static_cast<size_t>(t)] =
                mpq_class(b[static_cast<size_t>(i)][static_cast<size_t>(t)]);
        for (int j = 0; j < i; ++j) {
            mpq_class num(0);
            for (int t = 0; t < n; ++t)
                num += mpq_class(b[static_cast<size_t>(i)][static_cast<size_t>(t)]) *
                       star[static_cast<size_t>(j)][static_cast<size_t>(t)];
            mpq_class m = num / out.gso_norm2[static_cast<size_t>(j)];
            out.mu[static_cast<size_t>(i)][static_cast<size_t>(j)] = m;
            for (int t = 0; t < n; ++t)
                star[static_cast<size_t>(i)][static_cast<size_t>(t)] -=
                    m * star[static_cast<size_t>(j)][static_cast<size_t>(t)];
        }
        mpq_class nn(0);
        for (int t = 0; t < n; ++t) {
            const mpq_class& x = star[static_cast<size_t>(i)][static_cast<size_t>(t)];
            nn += x * x;
        }
        out.gso_norm2[static_cast<size_t>(i)] = nn;
    }
    return out;
}

Lattice build_approx_lattice(const std::vector<Interval>& etas, const mpz_class& C) {
    if (C <= 0) throw std::domain_error("build_approx_lattice: C must be positive");
    const int n = static_cast<int>(etas.size());
    if (n < 2) throw std::domain_error("build_approx_lattice: need at least two etas");
    const long c_bits = static_cast<long>(mpz_sizeinbase(C.get_mpz_t(), 2));
    Lattice lat;
    for (int j = 0; j < n; ++j) {
        if (etas[static_cast<size_t>(j)].precision() < c_bits + 16)
            throw precision_error("build_approx_lattice: eta precision below log2(C) + 16");
        Interval scaled = etas[static_cast<size_t>(j)] *
                          Interval(C, etas[static_cast<size_t>(j)].precision());
        auto fl = scaled.floor_certified();
        if (!fl) throw precision_error("build_approx_lattice: floor(C*eta) not certified");
        IntVec col(static_cast<size_t>(n), mpz_class(0));
        if (j < n - 1) col[static_cast<size_t>(j)] = 1;
        col[static_cast<size_t>(n - 1)] = *fl;
        lat.cols.push_back(std::move(col));
    }
    return lat;
}

Certificate certificate(const ReducedBasis& red, const std::vector<mpq_class>& y) {
    const int n = red.dim();
    mpq_class b1_norm2(0);
    for (int t = 0; t < n; ++t) {
        mpq_class x(red.cols[0][static_cast<size_t>(t)]);
        b1_norm2 += x * x;
    }
    mpq_class min_gso = red.gso_norm2[0];
    for (int j = 1; j < n; ++j) min_gso = std::min(min_gso, red.gso_norm2[static_cast<size_t>(j)]);

    mpq_class lambda_sq(1);
    bool y_zero = true;
    for (const auto& v : y)
        if (v != 0) y_zero = false;
    if (!y.empty() && !y_zero) {
        if (static_cast<int>(y.size()) != n)
            throw std::domain_error("certificate: y has wrong dimension");
        // z = B^(-1) y by exact Cramer solve; lambda = frac(z_i0) for the
        // largest i0 with z_i0 != 0.
        std::vector<std::vector<mpq_class>> m(static_cast<size_t>(n),
                                              std::vector<mpq_class>(static_cast<size_t>(n) + 1));
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c)
                m[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                    mpq_class(red.cols[static_cast<size_t>(c)][static_cast<size_t>(r)]);
            m[static_cast<size_t>(r)][static_cast<size_t>(n)] = y[static_cast<size_t>(r)];
        }
        for (int c = 0; c < n; ++c) {  // Gaussian elimination, exact
            int piv = c;
            while (piv < n && m[static_cast<size_t>(piv)][static_cast<size_t>(c)] == 0) ++piv;
            if (piv == n) throw std::domain_error("certificate: singular basis");
            std::swap(m[static_cast<size_t>(piv)], m[static_cast<size_t>(c)]);
            for (int r = 0; r < n; ++r) {
                if (r == c || m[static_cast<size_t>(r)][static_cast<size_t>(c)] == 0) continue;
                mpq_class f = m[static_cast<size_t>(r)][static_cast<size_t>(c)] /
                              m[static_cast<size_t>(c)][static_cast<size_t>(c)];
                for (int t = c; t <= n; ++t)
                    m[static_cast<size_t>(r)][static_cast<size_t>(t)] -=
                        f * m[static_cast<size_t>(c)][static_cast<size_t>(t)];
            }
        }
        int i0 = -1;
        mpq_class zi0;
        for (int i = n - 1; i >= 0; --i) {
            mpq_class z = m[static_cast<size_t>(i)][static_cast<size_t>(n)] /
                          m[static_cast<size_t>(i)][static_cast<size_t>(i)];
            if (z != 0) {
                i0 = i;
                zi0 = z;
                break;
            }
        }
        if (i0 < 0) {
            lambda_sq = 1;  // y = 0 in lattice coordinates
        } else {
            mpz_class fl;
            mpz_fdiv_q(fl.get_mpz_t(), zi0.get_num().get_mpz_t(), zi0.get_den().get_mpz_t());
            mpq_class frac = zi0 - mpq_class(fl);
            if (frac == 0)
                lambda_sq = 1;  // y in the lattice
            else
                lambda_sq = frac * frac;
        }
    }

    Certificate cert;
    cert.c1_sq = b1_norm2 / min_gso;
    cert.delta_sq = lambda_sq * min_gso;
    return cert;
}

mpq_class shortest_vector_norm2(const ReducedBasis& red) {
    const int n = red.dim();
    // Fincke-Pohst over the reduced basis: ||sum x_i b_i||^2 =
    // sum_j ||b*_j||^2 (x_j + sum_{i>j} mu_ij x_i)^2, enumerated from the
    // last coordinate down with exact rational bounds.
    mpq_class best(0);
    for (int t = 0; t < n; ++t) {
        mpq_class x(red.cols[0][static_cast<size_t>(t)]);
        best += x * x;
    }

    std::vector<long> xs(static_cast<size_t>(n), 0);
    // recursive descent
    std::function<void(int, const mpq_class&)> descend = [&](int level, const mpq_class& partial) {
        if (level < 0) {
            if (partial > 0 && partial < best) best = partial;
            return;
        }
        // center: c = -sum_{i>level} mu[i][level] * x_i
        mpq_class c(0);
        for (int i = level + 1; i < n; ++i)
            c -= red.mu[static_cast<size_t>(i)][static_cast<size_t>(level)] *
                 xs[static_cast<size_t>(i)];
        // remaining budget: (best - partial) / ||b*_level||^2
        mpq_class budget = (best - partial) / red.gso_norm2[static_cast<size_t>(level)];
        if (budget < 0) return;
        // |x - c| <= sqrt(budget): enumerate integers in [c - r, c + r]
        // conservative integer radius: isqrt(ceil(budget)) + 1
        mpz_class budget_ceil;
        mpz_cdiv_q(budget_ceil.get_mpz_t(), budget.get_num().get_mpz_t(),
                   budget.get_den().get_mpz_t());
        mpz_class r_int;
        mpz_sqrt(r_int.get_mpz_t(), budget_ceil.get_mpz_t());
        ++r_int;
        mpz_class c_floor;
        mpz_fdiv_q(c_floor.get_mpz_t(), c.get_num().get_mpz_t(), c.get_den().get_mpz_t());
        if (!c_floor.fits_slong_p() || !r_int.fits_slong_p())
            throw std::domain_error("shortest_vector_norm2: enumeration radius overflow");
        long lo = c_floor.get_si() - r_int.get_si();
        long hi = c_floor.get_si() + r_int.get_si() + 1;
        for (long x = lo; x <= hi; ++x) {
            mpq_class off = mpq_class(x) - c;
            mpq_class term = off * off * red.gso_norm2[static_cast<size_t>(level)];
            if (term > best - partial) continue;
            xs[static_cast<size_t>(level)] = x;
            descend(level - 1, partial + term);
        }
        xs[static_cast<size_t>(level)] = 0;
    };
    descend(n - 1, mpq_class(0));
    return best;
}

std::optional<double> reduce_bound(const mpz_class& C, const mpq_class& delta_sq,
                                   const std::vector<mpz_class>& X, double c3, double c4) {
    if (X.empty()) throw std::domain_error("reduce_bound: empty coefficient bounds");
    mpq_class S(0);
    mpz_class sumX(0);
    for (size_t i = 0; i < X.size(); ++i) {
        if (X[i] < 1) throw std::domain_error("reduce_bound: coefficient bounds must be >= 1");
        if (i + 1 < X.size()) S += mpq_class(X[i]) * mpq_class(X[i]);
        sumX += X[i];
    }
    mpq_class T = mpq_class(sumX + 1) / 2;
    return reduce_bound_with(C, delta_sq, S, T, c3, c4);
}

std::optional<double> reduce_bound_with(const mpz_class& C, const mpq_class& delta_sq,
                                        const mpq_class& S, const mpq_class& T, double c3,
                                        double c4) {
    if (c3 <= 0 || c4 <= 0) throw std::domain_error("reduce_bound: c3, c4 must be positive");
    if (delta_sq < T * T + S) return std::nullopt;

    // sqrt and logs with outward rounding; precision driven by the operand sizes
    long bits = static_cast<long>(mpz_sizeinbase(delta_sq.get_num().get_mpz_t(), 2));
    mpfr_prec_t prec = static_cast<mpfr_prec_t>(std::max<long>(256, bits / 2 + 64));
    Interval root = (Interval(delta_sq, prec) - Interval(S, prec)).sqrt();
    Interval gap = root - Interval(T, prec);
    if (!gap.certainly_positive()) return std::nullopt;
    Interval log_cc3 = (Interval(C, prec) * Interval(mpq_class(c3), prec)).log();
    Interval h = (log_cc3 - gap.log()) / Interval(mpq_class(c4), prec);
    // upper endpoint, rounded up
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set(t, h.hi(), MPFR_RNDU);
    double out = mpfr_get_d(t, MPFR_RNDU);
    mpfr_clear(t);
    return out;
}

namespace {

struct Cell {
    long k;
    int d1;
    int d2;
    long ell;
};

// Coefficient bound vector per form: the unit coefficient gets X = 1, the
// two exponent coefficients get the n bound. The degenerate dimension-2
// case absorbs a small power shift into the coefficients, hence the slack.
std::vector<mpz_class> coefficient_bounds(FormKind form, const mpz_class& n_bound, int dim) {
    if (dim == 2) return {n_bound + 64, n_bound + 64};
    if (form == FormKind::G1 || form == FormKind::G2) return {n_bound, n_bound, mpz_class(1)};
    return {mpz_class(1), n_bound, n_bound};
}

}  // namespace

ReductionSummary reduction_round(const ReductionPlan& plan) {
    ReductionSummary summary;
    summary.form = plan.form;
    if (plan.C <= 0 || plan.n_bound < 1) throw std::domain_error("reduction_round: bad plan");

    const bool needs_alpha = plan.form == FormKind::G1 || plan.form == FormKind::G2;
    const bool uses_ell = plan.form == FormKind::G2 || plan.form == FormKind::G4;
    const bool uses_k = needs_alpha;

    std::vector<Cell> cells;
    std::vector<long> k_values{0}, ell_values{0};
    if (uses_k) {
        k_values.clear();
        for (long k = plan.k_min; k <= plan.k_max; k += plan.k_stride) k_values.push_back(k);
        if (k_values.empty() || k_values.back() != plan.k_max) k_values.push_back(plan.k_max);
    }
    if (uses_ell) {
        ell_values.clear();
        for (long l = plan.ell_min; l <= plan.ell_max; l += plan.ell_stride) ell_values.push_back(l);
        if (ell_values.empty() || ell_values.back() != plan.ell_max)
            ell_values.push_back(plan.ell_max);
    }
    for (long k : k_values)
        for (long l : ell_values)
            for (auto [d1, d2] : plan.digit_pairs) cells.push_back(Cell{k, d1, d2, l});

    summary.cell_count = cells.size();
    if (plan.keep_cell_records) summary.cells.assign(cells.size(), CellRecord{});
    std::vector<double> group_max;       // per-group H maxima, merged at the end
    std::vector<std::vector<CellRecord>> group_unresolved;

    // headroom for up to max_escalations C * 10^3 bumps (about 10 bits each)
    const long bits0 = plan.precision_bits > 0
                           ? plan.precision_bits
                           : Precision::for_scaling(plan.C).bits + 10 * plan.max_escalations + 16;

    auto run_cell = [&](size_t idx, size_t group, const AlgebraicContext* alg) {
        const Cell& cell = cells[idx];
        CellRecord rec;
        rec.k = cell.k;
        rec.d1 = cell.d1;
        rec.d2 = cell.d2;
        rec.ell = cell.ell;

        mpz_class C = plan.C;
        for (int attempt = 0; attempt <= plan.max_escalations; ++attempt) {
            long bits = bits0;
            mpfr_prec_t prec = static_cast<mpfr_prec_t>(bits);
            std::vector<Interval> etas;
            switch (plan.form) {
                case FormKind::G1: {
                    Interval g1 = alg->binet_coeff().mul(9).div(cell.d1);
                    etas = {alg->log_alpha(),
                            -Interval(10L, prec).log(),
                            g1.log()};
                    break;
                }
                case FormKind::G2: {
                    mpz_class w = cell.d1 * pow10_z(static_cast<unsigned long>(cell.ell)) -
                                  (cell.d1 - cell.d2);
                    Interval g1 = alg->binet_coeff().mul(9) / Interval(w, prec);
                    etas = {alg->log_alpha(), -Interval(10L, prec).log(), g1.log()};
                    break;
                }
                case FormKind::G3: {
                    Interval g1 = Interval(mpq_class(cell.d1, 27), prec);
                    etas = {g1.log(), Interval(10L, prec).log(), -Interval(2L, prec).log()};
                    break;
                }
                case FormKind::G4: {
                    mpz_class w = cell.d1 * pow10_z(static_cast<unsigned long>(cell.ell)) -
                                  (cell.d1 - cell.d2);
                    // When w/27 = 2^a 5^b (w in {27, 54, 108} within reach),
                    // log(gamma1) lies in the span of log 10 and log 2: the
                    // three-log form collapses to two logs with the power
                    // folded into the coefficients, so reduce in dimension 2.
                    mpz_class q = w;
                    bool degenerate = false;
                    if (q % 27 == 0) {
                        q /= 27;
                        while (q % 2 == 0) q /= 2;
                        while (q % 5 == 0) q /= 5;
                        degenerate = (q == 1);
                    }
                    if (degenerate) {
                        etas = {Interval(10L, prec).log(), -Interval(2L, prec).log()};
                    } else {
                        Interval g1 = Interval(mpq_class(w, 27), prec);
                        etas = {g1.log(), Interval(10L, prec).log(), -Interval(2L, prec).log()};
                    }
                    break;
                }
            }
            // G1/G2 contexts may carry fewer bits than the plan needs
            if (needs_alpha && alg->bits() < bits)
                throw precision_error("reduction_round: algebraic context too coarse for C");

            Lattice lat = build_approx_lattice(etas, C);
            ReducedBasis red = lll_reduce(lat);
            Certificate cert = certificate(red);
            // homogeneous case: the exact shortest vector is the sharp bound
            mpq_class lam1 = shortest_vector_norm2(red);
            mpq_class delta_sq = std::max(cert.delta_sq, lam1);

            auto X = coefficient_bounds(plan.form, plan.n_bound, lat.dim());
            auto H = reduce_bound(C, delta_sq, X, plan.c3, plan.c4);
            if (H) {
                rec.C_used = C;
                rec.delta_sq = delta_sq;
                mpq_class S(0);
                mpz_class sumX(0);
                for (size_t i = 0; i < X.size(); ++i) {
                    if (i + 1 < X.size()) S += mpq_class(X[i]) * mpq_class(X[i]);
                    sumX += X[i];
                }
                rec.S = S;
                rec.T = mpq_class(sumX + 1) / 2;
                rec.H = *H;
                rec.resolved = true;
                rec.escalations = attempt;
                break;
            }
            C *= 1000;
        }
        if (!rec.resolved) {
            rec.C_used = C;
            group_unresolved[group].push_back(rec);
        } else {
            group_max[group] = std::max(group_max[group], rec.H);
        }
        if (plan.keep_cell_records) summary.cells[idx] = std::move(rec);
    };

    // G1/G2: cells sharing k are contiguous, and each worker group builds
    // its algebraic context once. k-free forms are chunked for parallelism.
    std::vector<std::pair<size_t, size_t>> groups;
    if (uses_k) {
        size_t start = 0;
        for (size_t i = 1; i <= cells.size(); ++i) {
            if (i == cells.size() || cells[i].k != cells[start].k) {
                groups.emplace_back(start, i);
                start = i;
            }
        }
    } else {
        size_t chunk = std::max<size_t>(
            1, cells.size() / (static_cast<size_t>(std::max(1, plan.parallelism)) * 8));
        for (size_t i = 0; i < cells.size(); i += chunk)
            groups.emplace_back(i, std::min(cells.size(), i + chunk));
    }

    group_max.assign(groups.size(), 0.0);
    group_unresolved.assign(groups.size(), {});

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            size_t g = next.fetch_add(1);
            if (g >= groups.size() || failed.load()) return;
            auto [lo, hi] = groups[g];
            try {
                std::shared_ptr<const AlgebraicContext> alg;
                if (needs_alpha && plan.alg_provider) alg = plan.alg_provider(cells[lo].k);
                if (needs_alpha && !alg)
                    throw std::domain_error("reduction_round: missing algebraic context");
                for (size_t i = lo; i < hi; ++i) run_cell(i, g, alg.get());
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };

    int threads = std::max(1, plan.parallelism);
    if (threads == 1 || groups.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error("reduction_round: " + first_error);

    // deterministic merge: groups are in enumeration order
    summary.max_H = 0.0;
    for (size_t g = 0; g < groups.size(); ++g) {
        summary.max_H = std::max(summary.max_H, group_max[g]);
        for (auto& rec : group_unresolved[g]) summary.unresolved.push_back(std::move(rec));
    }
    return summary;
}

}  // namespace klp
