#include "modal.hpp"

#include <algorithm>
#include <mutex>

#include <fftw3.h>

namespace rmc {

void ModalField::add(const ModeIndex& idx, const std::array<double, 4>& v, double scale) {
    auto& dst = c[idx];
    for (int i = 0; i < 4; ++i) dst[i] += scale * v[i];
}

void ModalField::add(const ModalField& other, double scale) {
    for (const auto& [idx, v] : other.c) add(idx, v, scale);
}

double ModalField::max_abs() const {
    double m = 0.0;
    for (const auto& [idx, v] : c)
        for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Eigen::VectorXd IndexBasis::project(const std::array<double, 4>& f) const {
    Eigen::Vector4d fv(f[0], f[1], f[2], f[3]);
    return Proj * fv;
}

IndexBasis index_basis(const Params& p, const ModeIndex& idx, double defect_tol) {
    IndexBasis b;
    b.idx = idx;
    b.cls = index_class(idx);
    const auto g = geometry(p, idx);
    auto finish = [&b]() {
        const Eigen::MatrixXd M = b.Adj.transpose() * b.V;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (!lu.isInvertible())
            throw Error(ErrorCode::Degenerate, "singular pairing matrix for " + b.idx.str());
        b.Proj = lu.solve(Eigen::MatrixXd(b.Adj.transpose()));
    };
    if (b.cls == IndexClass::I2) {
        b.n = 1;
        b.V.resize(4, 1);
        b.V << g.ky, -g.kx, 0.0, 0.0;
        b.Adj = b.V;
        const double beta = -(g.qk + g.alpha_jk_sq * g.alpha_jk_sq) / g.alpha_jk_sq;
        b.Lambda = Eigen::MatrixXd::Constant(1, 1, beta);
        b.beta = {beta};
        b.pair_re = b.pair_im = {false};
        finish();
        return b;
    }
    if (b.cls == IndexClass::I3) {
        b.n = 1;
        b.V.resize(4, 1);
        b.V << 0.0, 0.0, 0.0, 1.0;
        b.Adj = b.V;
        const double beta = -g.kz * g.kz / p.Pr;
        b.Lambda = Eigen::MatrixXd::Constant(1, 1, beta);
        b.beta = {beta};
        b.pair_re = b.pair_im = {false};
        finish();
        return b;
    }
    const auto ms = mode_spectrum(p, idx);
    const auto& br = ms.branches;
    for (size_t s = 0; s < br.size(); ++s)
        for (size_t t = s + 1; t < br.size(); ++t)
            if (std::abs(br[s].beta - br[t].beta) < defect_tol)
                throw Error(ErrorCode::Degenerate, "near-defective eigenvalues in " + idx.str());
    b.n = 3;
    b.V.resize(4, 3);
    b.Adj.resize(4, 3);
    b.Lambda = Eigen::MatrixXd::Zero(3, 3);
    auto re4 = [](const EigvecCoeffs& e) { return Eigen::Vector4d(e.u1.real(), e.u2.real(), e.u3.real(), e.theta.real()); };
    auto im4 = [](const EigvecCoeffs& e) { return Eigen::Vector4d(e.u1.imag(), e.u2.imag(), e.u3.imag(), e.theta.imag()); };
    int col = 0;
    for (size_t s = 0; s < br.size(); ++s) {
        const cplx beta = br[s].beta;
        if (is_real_root(beta)) {
            b.V.col(col) = re4(br[s].vec);
            b.Adj.col(col) = re4(br[s].adj);
            b.Lambda(col, col) = beta.real();
            b.beta.push_back(beta.real());
            b.pair_re.push_back(false);
            b.pair_im.push_back(false);
            ++col;
            continue;
        }
        // Upper member of the pair comes first in the sorted spectrum.
        const double sg = beta.real(), rh = beta.imag();
        b.V.col(col) = re4(br[s].vec);
        b.V.col(col + 1) = im4(br[s].vec);
        b.Adj.col(col) = re4(br[s].adj);
        b.Adj.col(col + 1) = im4(br[s].adj);
        b.Lambda(col, col) = sg;
        b.Lambda(col, col + 1) = rh;
        b.Lambda(col + 1, col) = -rh;
        b.Lambda(col + 1, col + 1) = sg;
        b.beta.push_back(beta);
        b.beta.push_back(beta);
        b.pair_re.push_back(true);
        b.pair_re.push_back(false);
        b.pair_im.push_back(false);
        b.pair_im.push_back(true);
        col += 2;
        ++s;
    }
    finish();
    return b;
}

int fft_size_above(int reach) {
    for (int n = std::max(1, reach + 1);; ++n) {
        int m = n;
        for (int f : {2, 3, 5})
            while (m % f == 0) m /= f;
        if (m == 1) return n;
    }
}

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

constexpr int kSynthChannels = 16;
constexpr int kOutChannels = 4;

}  // namespace

struct SpectralGrid::Impl {
    int n1, n2, n3;
    size_t plane;
    std::vector<double> zc;  // midpoints
    fftw_complex* synth_buf = nullptr;
    fftw_complex* out_buf = nullptr;
    fftw_plan synth_plan = nullptr;
    fftw_plan out_plan = nullptr;

    Impl(int a, int b, int c) : n1(a), n2(b), n3(c), plane(static_cast<size_t>(a) * b) {
        zc.resize(n3);
        for (int n = 0; n < n3; ++n) zc[n] = (n + 0.5) / n3;
        const size_t ns = plane * n3 * kSynthChannels, no = plane * n3 * kOutChannels;
        std::lock_guard<std::mutex> lock(plan_mutex());
        synth_buf = fftw_alloc_complex(ns);
        out_buf = fftw_alloc_complex(no);
        int dims[2] = {n1, n2};
        const int dist = static_cast<int>(plane);
        synth_plan = fftw_plan_many_dft(2, dims, n3 * kSynthChannels, synth_buf, nullptr, 1, dist, synth_buf,
                                        nullptr, 1, dist, FFTW_BACKWARD, FFTW_ESTIMATE);
        out_plan = fftw_plan_many_dft(2, dims, n3 * kOutChannels, out_buf, nullptr, 1, dist, out_buf, nullptr, 1,
                                      dist, FFTW_FORWARD, FFTW_ESTIMATE);
        if (!synth_buf || !out_buf || !synth_plan || !out_plan)
            throw Error(ErrorCode::Internal, "FFT plan creation failed");
    }
    ~Impl() {
        std::lock_guard<std::mutex> lock(plan_mutex());
        fftw_destroy_plan(synth_plan);
        fftw_destroy_plan(out_plan);
        fftw_free(synth_buf);
        fftw_free(out_buf);
    }
    size_t wrap(int j, int k) const {
        const int a = ((j % n1) + n1) % n1, b = ((k % n2) + n2) % n2;
        return static_cast<size_t>(a) * n2 + b;
    }
};

SpectralGrid::SpectralGrid(const Params& p, Bounds3 fa, Bounds3 fb, Bounds3 out) : p_(p), out_(out) {
    n1_ = fft_size_above(fa.jmax + fb.jmax + out.jmax);
    n2_ = fft_size_above(fa.kmax + fb.kmax + out.kmax);
    // Midpoint rule in x3 is exact for cos(m pi z) unless m is a nonzero multiple of 2 n3.
    n3_ = std::max(1, (fa.lmax + fb.lmax + out.lmax) / 2 + 1);
    impl_ = std::make_unique<Impl>(n1_, n2_, n3_);
}

SpectralGrid::~SpectralGrid() = default;

PhysField SpectralGrid::synth(const ModalField& f) const {
    Impl& m = *impl_;
    const size_t total = m.plane * m.n3 * kSynthChannels;
    std::fill(reinterpret_cast<double*>(m.synth_buf), reinterpret_cast<double*>(m.synth_buf) + 2 * total, 0.0);
    std::vector<double> cz(m.n3), sz(m.n3);
    for (const auto& [idx, c] : f.c) {
        const auto g = geometry(p_, idx);
        for (int n = 0; n < m.n3; ++n) {
            cz[n] = std::cos(g.kz * m.zc[n]);
            sz[n] = std::sin(g.kz * m.zc[n]);
        }
        const bool origin = idx.j == 0 && idx.k == 0;
        const size_t pp = m.wrap(idx.j, idx.k), pm = m.wrap(-idx.j, -idx.k);
        auto put = [&](int ch, double amp, bool hsin, bool zsin) {
            if (amp == 0.0) return;
            if (hsin && origin) return;
            const std::vector<double>& zf = zsin ? sz : cz;
            for (int n = 0; n < m.n3; ++n) {
                fftw_complex* base = m.synth_buf + (static_cast<size_t>(ch) * m.n3 + n) * m.plane;
                const double a = amp * zf[n];
                if (hsin) {
                    base[pp][1] += -0.5 * a;
                    base[pm][1] += 0.5 * a;
                } else if (origin) {
                    base[pp][0] += a;
                } else {
                    base[pp][0] += 0.5 * a;
                    base[pm][0] += 0.5 * a;
                }
            }
        };
        for (int i = 0; i < 2; ++i) {
            put(4 * i + 0, c[i], true, false);
            put(4 * i + 1, c[i] * g.kx, false, false);
            put(4 * i + 2, c[i] * g.ky, false, false);
            put(4 * i + 3, -c[i] * g.kz, true, true);
        }
        for (int i = 2; i < 4; ++i) {
            put(4 * i + 0, c[i], false, true);
            put(4 * i + 1, -c[i] * g.kx, true, true);
            put(4 * i + 2, -c[i] * g.ky, true, true);
            put(4 * i + 3, c[i] * g.kz, false, false);
        }
    }
    fftw_execute(m.synth_plan);
    PhysField out;
    const size_t npts = m.plane * m.n3;
    for (int i = 0; i < 4; ++i)
        for (int d = 0; d < 4; ++d) {
            std::vector<double>& dst = d == 0 ? out.v[i] : out.g[i][d - 1];
            dst.resize(npts);
            const fftw_complex* src = m.synth_buf + static_cast<size_t>(4 * i + d) * npts;
            for (size_t q = 0; q < npts; ++q) dst[q] = src[q][0];
        }
    return out;
}

ModalField SpectralGrid::advect(const PhysField& a, const PhysField& b) const {
    Impl& m = *impl_;
    const size_t npts = m.plane * m.n3;
    for (int i = 0; i < 4; ++i) {
        fftw_complex* dst = m.out_buf + static_cast<size_t>(i) * npts;
        const auto& g = b.g[i];
        for (size_t q = 0; q < npts; ++q) {
            dst[q][0] = -(a.v[0][q] * g[0][q] + a.v[1][q] * g[1][q] + a.v[2][q] * g[2][q]);
            dst[q][1] = 0.0;
        }
    }
    fftw_execute(m.out_plan);
    const double norm = 1.0 / static_cast<double>(m.plane);
    ModalField res;
    std::vector<double> hc[2] = {std::vector<double>(m.n3), std::vector<double>(m.n3)};
    std::vector<double> hsv[2] = {std::vector<double>(m.n3), std::vector<double>(m.n3)};
    for (int j = 0; j <= out_.jmax; ++j)
        for (int k = -out_.kmax; k <= out_.kmax; ++k) {
            if (j == 0 && k < 0) continue;
            const bool origin = j == 0 && k == 0;
            const size_t pos = m.wrap(j, k);
            for (int n = 0; n < m.n3; ++n) {
                for (int i = 0; i < 2; ++i) {
                    const fftw_complex& v = m.out_buf[(static_cast<size_t>(i) * m.n3 + n) * m.plane + pos];
                    hsv[i][n] = origin ? 0.0 : -2.0 * v[1] * norm;
                }
                for (int i = 0; i < 2; ++i) {
                    const fftw_complex& v = m.out_buf[(static_cast<size_t>(i + 2) * m.n3 + n) * m.plane + pos];
                    hc[i][n] = (origin ? 1.0 : 2.0) * v[0] * norm;
                }
            }
            for (int l = 0; l <= out_.lmax; ++l) {
                if (origin && l == 0) continue;
                const double kz = l * kPi;
                std::array<double, 4> cf{0.0, 0.0, 0.0, 0.0};
                const double wc = (l == 0 ? 1.0 : 2.0) / m.n3, ws = 2.0 / m.n3;
                for (int n = 0; n < m.n3; ++n) {
                    const double c = std::cos(kz * m.zc[n]), s = std::sin(kz * m.zc[n]);
                    cf[0] += wc * hsv[0][n] * c;
                    cf[1] += wc * hsv[1][n] * c;
                    if (l > 0) {
                        cf[2] += ws * hc[0][n] * s;
                        cf[3] += ws * hc[1][n] * s;
                    }
                }
                res.c[ModeIndex{j, k, l}] = cf;
            }
        }
    return res;
}

}  // namespace rmc
