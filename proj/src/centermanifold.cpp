#include "centermanifold.hpp"

#include <algorithm>
#include <set>

namespace rmc {

double CenterManifoldResult::cubic_coef(int eq, const Monomial& m) const {
    const auto& row = cubic.at(eq);
    auto it = row.find(m);
    return it == row.end() ? 0.0 : it->second;
}

namespace {

std::vector<Monomial> monomials_of_degree(int dim, int deg) {
    std::vector<Monomial> out;
    Monomial e(dim, 0);
    // Lexicographically descending in the first exponent: x^2, xy, y^2 for dim 2.
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == dim - 1) {
            e[pos] = left;
            out.push_back(e);
            return;
        }
        for (int v = left; v >= 0; --v) {
            e[pos] = v;
            self(self, pos + 1, left - v);
        }
    };
    rec(rec, 0, deg);
    return out;
}

ModalField single(const IndexBasis& b, int col) {
    ModalField f;
    f.add(b.idx, b.column(col));
    return f;
}

}  // namespace

CenterManifoldResult reduce_center_manifold(const Params& p, const std::vector<CriticalCoord>& crit,
                                            bool at_criticality, double resonance_tol) {
    const int m = static_cast<int>(crit.size());
    if (m < 1 || m > 2) throw Error(ErrorCode::Validation, "center manifold supports 1 or 2 critical coordinates");
    CenterManifoldResult res;
    res.dim = m;

    std::map<ModeIndex, IndexBasis> bases;
    Bounds3 bc;
    for (const auto& c : crit) {
        if (!bases.count(c.idx)) bases.emplace(c.idx, index_basis(p, c.idx));
        bc.jmax = std::max(bc.jmax, std::abs(c.idx.j));
        bc.kmax = std::max(bc.kmax, std::abs(c.idx.k));
        bc.lmax = std::max(bc.lmax, c.idx.l);
    }
    for (const auto& c : crit)
        if (c.col < 0 || c.col >= bases.at(c.idx).n)
            throw Error(ErrorCode::Validation, "critical column out of range for " + c.idx.str());

    res.Lc = Eigen::MatrixXd::Zero(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            if (crit[a].idx == crit[b].idx) res.Lc(a, b) = bases.at(crit[a].idx).Lambda(crit[a].col, crit[b].col);
    if (at_criticality)
        for (int a = 0; a < m; ++a) res.Lc(a, a) = 0.0;

    const Bounds3 b2{2 * bc.jmax, 2 * bc.kmax, 2 * bc.lmax};
    SpectralGrid grid(p, bc, b2, b2);
    res.grid_n1 = grid.n1();
    res.grid_n2 = grid.n2();
    res.grid_n3 = grid.n3();

    std::vector<PhysField> psi;
    for (const auto& c : crit) psi.push_back(grid.synth(single(bases.at(c.idx), c.col)));

    const auto quad = monomials_of_degree(m, 2);
    const int nq = static_cast<int>(quad.size());
    auto pair_of = [&](const Monomial& e) {
        std::vector<int> v;
        for (int i = 0; i < m; ++i)
            for (int r = 0; r < e[i]; ++r) v.push_back(i);
        return std::make_pair(v[0], v[1]);
    };
    std::vector<ModalField> F(nq);
    double scale = 0.0;
    for (int q = 0; q < nq; ++q) {
        const auto [a, b] = pair_of(quad[q]);
        F[q] = grid.advect(psi[a], psi[b]);
        if (a != b) F[q].add(grid.advect(psi[b], psi[a]));
        scale = std::max(scale, F[q].max_abs());
    }

    // Derivative of each quadratic monomial along the critical linear flow, in the monomial basis.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nq, nq);
    for (int q = 0; q < nq; ++q)
        for (int i = 0; i < m; ++i) {
            if (quad[q][i] == 0) continue;
            for (int c = 0; c < m; ++c) {
                if (res.Lc(i, c) == 0.0) continue;
                Monomial e = quad[q];
                e[i] -= 1;
                e[c] += 1;
                const int t = static_cast<int>(std::find(quad.begin(), quad.end(), e) - quad.begin());
                T(q, t) += quad[q][i] * res.Lc(i, c);
            }
        }

    std::set<ModeIndex> forced;
    for (const auto& f : F)
        for (const auto& [idx, v] : f.c)
            for (double x : v)
                if (std::abs(x) > 1e-12 * std::max(scale, 1e-300)) forced.insert(idx);

    std::vector<ModalField> Phi(nq);
    for (const auto& idx : forced) {
        auto it = bases.find(idx);
        if (it == bases.end()) it = bases.emplace(idx, index_basis(p, idx)).first;
        const IndexBasis& B = it->second;
        std::vector<int> cols;
        for (int s = 0; s < B.n; ++s) {
            bool is_crit = false;
            for (const auto& c : crit) is_crit = is_crit || (c.idx == idx && c.col == s);
            if (!is_crit) cols.push_back(s);
        }
        Eigen::MatrixXd N = Eigen::MatrixXd::Zero(static_cast<int>(cols.size()), nq);
        for (int q = 0; q < nq; ++q) {
            auto fit = F[q].c.find(idx);
            if (fit == F[q].c.end()) continue;
            const Eigen::VectorXd pr = B.project(fit->second);
            for (size_t r = 0; r < cols.size(); ++r) N(static_cast<int>(r), q) = pr(cols[r]);
            for (const auto& c : crit)
                if (c.idx == idx) res.quadratic_leak = std::max(res.quadratic_leak, std::abs(pr(c.col)));
        }
        if (cols.empty()) continue;
        const int ns = static_cast<int>(cols.size());
        Eigen::MatrixXd Ls(ns, ns);
        for (int r = 0; r < ns; ++r) {
            if (std::abs(B.beta[cols[r]]) < resonance_tol)
                throw Error(ErrorCode::ResonantSubMode, "sub-mode " + idx.str() + " is neutral at this Ra");
            for (int s = 0; s < ns; ++s) Ls(r, s) = B.Lambda(cols[r], cols[s]);
        }
        // Homological equation C T - Ls C = N for the coefficient matrix C (ns x nq).
        const int dimk = ns * nq;
        Eigen::MatrixXd K = Eigen::MatrixXd::Zero(dimk, dimk);
        for (int r = 0; r < ns; ++r)
            for (int q = 0; q < nq; ++q) {
                const int row = r * nq + q;
                for (int t = 0; t < nq; ++t) K(row, r * nq + t) += T(t, q);
                for (int s = 0; s < ns; ++s) K(row, s * nq + q) -= Ls(r, s);
            }
        Eigen::VectorXd rhs(dimk);
        for (int r = 0; r < ns; ++r)
            for (int q = 0; q < nq; ++q) rhs(r * nq + q) = N(r, q);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
        if (!lu.isInvertible())
            throw Error(ErrorCode::ResonantSubMode, "homological equation singular at " + idx.str());
        const Eigen::VectorXd sol = lu.solve(rhs);
        for (int r = 0; r < ns; ++r) {
            SlavedAmplitude sa;
            sa.idx = idx;
            sa.col = cols[r];
            sa.beta = B.beta[cols[r]];
            bool any = false;
            for (int q = 0; q < nq; ++q) {
                const double v = sol(r * nq + q);
                sa.coef[quad[q]] = v;
                any = any || v != 0.0;
                Phi[q].add(idx, B.column(cols[r]), v);
            }
            if (any) res.slaved.push_back(sa);
        }
    }

    // Cubic terms G(psi_a, Phi) + G(Phi, psi_a) projected onto the critical equations.
    res.cubic.assign(m, {});
    auto project_crit = [&](const ModalField& H) {
        std::vector<double> out(m, 0.0);
        for (int e = 0; e < m; ++e) {
            auto it = H.c.find(crit[e].idx);
            if (it == H.c.end()) continue;
            out[e] = bases.at(crit[e].idx).project(it->second)(crit[e].col);
        }
        return out;
    };
    for (int a = 0; a < m; ++a)
        for (int q = 0; q < nq; ++q) {
            if (Phi[q].c.empty()) continue;
            const PhysField ph = grid.synth(Phi[q]);
            ModalField H = grid.advect(psi[a], ph);
            H.add(grid.advect(ph, psi[a]));
            const auto pr = project_crit(H);
            Monomial e = quad[q];
            e[a] += 1;
            for (int eq = 0; eq < m; ++eq) res.cubic[eq][e] += pr[eq];
        }
    for (const auto& sa : res.slaved) {
        const PhysField ph = grid.synth(single(bases.at(sa.idx), sa.col));
        for (int a = 0; a < m; ++a) {
            ModalField H = grid.advect(psi[a], ph);
            H.add(grid.advect(ph, psi[a]));
            res.interaction[{a, {sa.idx, sa.col}}] = project_crit(H);
        }
    }
    return res;
}

}  // namespace rmc
