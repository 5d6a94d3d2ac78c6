#include "liouville/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace liouville {

namespace {

// One cached FFTW plan per (dims, n, sign), executed on its own aligned
// buffers under a lock.  FFTW_ESTIMATE keeps planning deterministic.
struct PlanSlot {
    fftw_plan plan = nullptr;
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    std::size_t size = 0;
};

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanSlot& plan_for(const Grid& grid, int sign) {
    static std::map<std::tuple<int, int, int>, PlanSlot> cache;
    const auto key = std::make_tuple(grid.dims(), grid.n(), sign);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    PlanSlot slot;
    slot.size = grid.size();
    slot.in = fftw_alloc_complex(slot.size);
    slot.out = fftw_alloc_complex(slot.size);
    int dims[3] = {grid.n(), grid.n(), grid.n()};
    slot.plan = fftw_plan_dft(grid.dims(), dims, slot.in, slot.out, sign, FFTW_ESTIMATE);
    if (slot.plan == nullptr) throw std::runtime_error("fftw_plan_dft failed");
    return cache.emplace(key, slot).first->second;
}

// Parity of the storage-index sum; e^{-i k.x} on the centered grid differs
// from the plain DFT kernel by exactly (-1)^(m1+...+mN).
inline double mode_parity_sign(const Grid& grid, std::size_t flat) {
    const std::size_t n = static_cast<std::size_t>(grid.n());
    std::size_t s = 0;
    std::size_t rest = flat;
    for (int d = 0; d < grid.dims(); ++d) {
        s += rest % n;
        rest /= n;
    }
    return (s & 1u) ? -1.0 : 1.0;
}

}  // namespace

SpectralField::SpectralField(const Grid& grid) : grid_(grid), coeffs_(grid.size()) {}

int SpectralField::signed_mode(int storage_index) const {
    const int n = grid_.n();
    return storage_index >= n / 2 ? storage_index - n : storage_index;
}

double SpectralField::wavenumber(int storage_index) const {
    return 2.0 * M_PI * signed_mode(storage_index) / grid_.length();
}

SpectralField to_spectral(const ScalarField& f) {
    const Grid& grid = f.grid();
    SpectralField out(grid);
    std::lock_guard<std::mutex> lock(plan_mutex());
    PlanSlot& slot = plan_for(grid, FFTW_FORWARD);
    for (std::size_t i = 0; i < slot.size; ++i) {
        slot.in[i][0] = f[i];
        slot.in[i][1] = 0.0;
    }
    fftw_execute(slot.plan);
    const double scale = grid.cell_volume();
    for (std::size_t i = 0; i < slot.size; ++i) {
        const double s = scale * mode_parity_sign(grid, i);
        out[i] = std::complex<double>(s * slot.out[i][0], s * slot.out[i][1]);
    }
    return out;
}

ScalarField from_spectral(const SpectralField& fhat) {
    const Grid& grid = fhat.grid();
    ScalarField out(grid);
    std::lock_guard<std::mutex> lock(plan_mutex());
    PlanSlot& slot = plan_for(grid, FFTW_BACKWARD);
    const double unscale = 1.0 / grid.cell_volume();
    for (std::size_t i = 0; i < slot.size; ++i) {
        const double s = unscale * mode_parity_sign(grid, i);
        slot.in[i][0] = s * fhat[i].real();
        slot.in[i][1] = s * fhat[i].imag();
    }
    fftw_execute(slot.plan);
    const double norm = 1.0 / static_cast<double>(grid.size());
    for (std::size_t i = 0; i < slot.size; ++i) out[i] = norm * slot.out[i][0];
    return out;
}

void for_each_mode(const SpectralField& fhat,
                   const std::function<void(std::size_t, const std::array<double, 3>&)>& f) {
    const Grid& grid = fhat.grid();
    const int n = grid.n();
    std::array<double, 3> k{0.0, 0.0, 0.0};
    std::size_t idx = 0;
    if (grid.dims() == 2) {
        for (int i = 0; i < n; ++i) {
            k[0] = fhat.wavenumber(i);
            for (int j = 0; j < n; ++j) {
                k[1] = fhat.wavenumber(j);
                f(idx++, k);
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            k[0] = fhat.wavenumber(i);
            for (int j = 0; j < n; ++j) {
                k[1] = fhat.wavenumber(j);
                for (int l = 0; l < n; ++l) {
                    k[2] = fhat.wavenumber(l);
                    f(idx++, k);
                }
            }
        }
    }
}

SpectralField derivative(const SpectralField& fhat, int axis) {
    const Grid& grid = fhat.grid();
    if (axis < 0 || axis >= grid.dims()) throw std::invalid_argument("derivative: bad axis");
    SpectralField out = fhat;
    const int n = grid.n();
    for_each_mode(out, [&](std::size_t idx, const std::array<double, 3>& k) {
        // Nyquist mode has no well-defined sign; drop it to keep reality.
        std::size_t rest = idx;
        bool nyquist = false;
        for (int d = grid.dims() - 1; d >= 0; --d) {
            const int m = static_cast<int>(rest % static_cast<std::size_t>(n));
            rest /= static_cast<std::size_t>(n);
            if (d == axis && m == n / 2) nyquist = true;
        }
        if (nyquist) {
            out[idx] = 0.0;
        } else {
            out[idx] *= std::complex<double>(0.0, k[static_cast<std::size_t>(axis)]);
        }
    });
    return out;
}

ScalarField derivative(const ScalarField& f, int axis) {
    return from_spectral(derivative(to_spectral(f), axis));
}

ScalarField divergence(const VectorField& v) {
    const Grid& grid = v.grid();
    SpectralField acc(grid);
    for (int d = 0; d < grid.dims(); ++d) {
        SpectralField dd = derivative(to_spectral(v.comp(d)), d);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += dd[i];
    }
    return from_spectral(acc);
}

VectorField leray_project(const VectorField& v) {
    const Grid& grid = v.grid();
    const int dims = grid.dims();
    std::vector<SpectralField> vhat;
    vhat.reserve(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) vhat.push_back(to_spectral(v.comp(d)));

    for_each_mode(vhat[0], [&](std::size_t idx, const std::array<double, 3>& k) {
        const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if (k2 == 0.0) return;  // zero mode passes through
        std::complex<double> kdotv(0.0, 0.0);
        for (int d = 0; d < dims; ++d) kdotv += k[static_cast<std::size_t>(d)] * vhat[static_cast<std::size_t>(d)][idx];
        const std::complex<double> scale = kdotv / k2;
        for (int d = 0; d < dims; ++d) vhat[static_cast<std::size_t>(d)][idx] -= k[static_cast<std::size_t>(d)] * scale;
    });

    VectorField out(grid);
    for (int d = 0; d < dims; ++d) out.comp(d) = from_spectral(vhat[static_cast<std::size_t>(d)]);
    return out;
}

std::vector<std::complex<double>> nudft(std::span<const ScalarField* const> fields,
                                        const std::array<double, 3>& xi) {
    if (fields.empty()) return {};
    const Grid& grid = fields[0]->grid();
    const int n = grid.n();
    const int dims = grid.dims();
    for (const ScalarField* f : fields) {
        if (!(f->grid() == grid)) throw std::invalid_argument("nudft: grid mismatch");
    }

    // Separable phase tables e^{-i xi_a x} per axis.
    std::vector<std::vector<std::complex<double>>> phase(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) {
        phase[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double arg = -xi[static_cast<std::size_t>(d)] * grid.coord(i);
            phase[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
                std::complex<double>(std::cos(arg), std::sin(arg));
        }
    }

    const std::size_t count = fields.size();
    std::vector<double> sum_re(count, 0.0), sum_im(count, 0.0);
    std::vector<double> carry_re(count, 0.0), carry_im(count, 0.0);
    auto accumulate = [&](std::size_t which, const std::complex<double>& z) {
        double y = z.real() - carry_re[which];
        double t = sum_re[which] + y;
        carry_re[which] = (t - sum_re[which]) - y;
        sum_re[which] = t;
        y = z.imag() - carry_im[which];
        t = sum_im[which] + y;
        carry_im[which] = (t - sum_im[which]) - y;
        sum_im[which] = t;
    };

    std::size_t idx = 0;
    if (dims == 2) {
        for (int i = 0; i < n; ++i) {
            const std::complex<double> pi0 = phase[0][static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                const std::complex<double> ph = pi0 * phase[1][static_cast<std::size_t>(j)];
                for (std::size_t w = 0; w < count; ++w) accumulate(w, (*fields[w])[idx] * ph);
                ++idx;
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            const std::complex<double> pi0 = phase[0][static_cast<std::size_t>(i)];
            for (int j = 0; j < n; ++j) {
                const std::complex<double> pij = pi0 * phase[1][static_cast<std::size_t>(j)];
                for (int l = 0; l < n; ++l) {
                    const std::complex<double> ph = pij * phase[2][static_cast<std::size_t>(l)];
                    for (std::size_t w = 0; w < count; ++w) accumulate(w, (*fields[w])[idx] * ph);
                    ++idx;
                }
            }
        }
    }

    const double scale = grid.cell_volume();
    std::vector<std::complex<double>> out(count);
    for (std::size_t w = 0; w < count; ++w) {
        out[w] = std::complex<double>(scale * sum_re[w], scale * sum_im[w]);
    }
    return out;
}

std::complex<double> nudft(const ScalarField& f, const std::array<double, 3>& xi) {
    const ScalarField* ptr = &f;
    return nudft(std::span<const ScalarField* const>(&ptr, 1), xi)[0];
}

void dealias(SpectralField& fhat) {
    const Grid& grid = fhat.grid();
    const int n = grid.n();
    const int keep = n / 3;  // zero any |m| > n/3
    const std::size_t nn = static_cast<std::size_t>(n);
    for (std::size_t idx = 0; idx < fhat.size(); ++idx) {
        std::size_t rest = idx;
        bool kill = false;
        for (int d = 0; d < grid.dims(); ++d) {
            const int m_s = static_cast<int>(rest % nn);
            rest /= nn;
            const int m = m_s >= n / 2 ? m_s - n : m_s;
            if (std::abs(m) > keep) {
                kill = true;
                break;
            }
        }
        if (kill) fhat[idx] = 0.0;
    }
}

ScalarField upsample(const ScalarField& f, int factor) {
    const Grid& coarse = f.grid();
    if (factor < 1) throw std::invalid_argument("upsample: factor must be >= 1");
    if (factor == 1) return f;
    const Grid fine(coarse.dims(), coarse.n() * factor, coarse.length());
    const SpectralField chat = to_spectral(f);
    SpectralField fhat(fine);

    const int nc = coarse.n();
    const int nf = fine.n();
    const int dims = coarse.dims();
    const std::size_t ncs = static_cast<std::size_t>(nc);
    for (std::size_t idx = 0; idx < chat.size(); ++idx) {
        std::size_t rest = idx;
        int modes[3] = {0, 0, 0};
        for (int d = dims - 1; d >= 0; --d) {
            const int m_s = static_cast<int>(rest % ncs);
            rest /= ncs;
            modes[d] = m_s >= nc / 2 ? m_s - nc : m_s;
        }
        // split the coarse Nyquist coefficient between +-n/2 to keep the
        // interpolant real
        double weight = 1.0;
        for (int d = 0; d < dims; ++d) {
            if (modes[d] == -nc / 2) weight *= 0.5;
        }
        const std::complex<double> value = weight * chat[idx];
        const int copies = 1 << [&] {
            int nyq = 0;
            for (int d = 0; d < dims; ++d) nyq += modes[d] == -nc / 2 ? 1 : 0;
            return nyq;
        }();
        for (int c = 0; c < copies; ++c) {
            int target[3] = {modes[0], modes[1], modes[2]};
            int bit = 0;
            for (int d = 0; d < dims; ++d) {
                if (modes[d] == -nc / 2) {
                    if (c & (1 << bit)) target[d] = nc / 2;
                    ++bit;
                }
            }
            std::size_t fidx = 0;
            for (int d = 0; d < dims; ++d) {
                const int m_s = target[d] < 0 ? target[d] + nf : target[d];
                fidx = fidx * static_cast<std::size_t>(nf) + static_cast<std::size_t>(m_s);
            }
            fhat[fidx] += value;
        }
    }
    return from_spectral(fhat);
}

double ball_integral(const SpectralField& fhat, double radius) {
    const Grid& grid = fhat.grid();
    if (!(radius > 0.0)) throw std::invalid_argument("ball_integral: radius must be positive");
    double fmax = 0.0;
    for (const auto& c : fhat.coeffs()) fmax = std::max(fmax, std::abs(c.real()) + std::abs(c.imag()));
    const double skip_below = 1e-16 * fmax;

    const int dims = grid.dims();
    double sum = 0.0, carry = 0.0;
    for_each_mode(fhat, [&](std::size_t idx, const std::array<double, 3>& k) {
        const double fre = fhat[idx].real();
        if (std::abs(fre) + std::abs(fhat[idx].imag()) < skip_below) return;
        const double kn = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        double kernel;  // integral of e^{-i k.x} over |x| <= R (real, even in k)
        if (kn == 0.0) {
            kernel = dims == 2 ? M_PI * radius * radius : 4.0 * M_PI * radius * radius * radius / 3.0;
        } else {
            const double z = kn * radius;
            if (dims == 2) {
                kernel = 2.0 * M_PI * radius * radius * std::cyl_bessel_j(1, z) / z;
            } else {
                kernel = 4.0 * M_PI * (std::sin(z) - z * std::cos(z)) / (kn * kn * kn);
            }
        }
        const double y = fre * kernel - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    });
    double volume = 1.0;
    for (int d = 0; d < dims; ++d) volume *= grid.length();
    return sum / volume;
}

double spectral_inner(const SpectralField& fhat, const SpectralField& ghat) {
    if (!(fhat.grid() == ghat.grid())) throw std::invalid_argument("spectral_inner: grid mismatch");
    double sum = 0.0, carry = 0.0;
    for (std::size_t i = 0; i < fhat.size(); ++i) {
        const double term = fhat[i].real() * ghat[i].real() + fhat[i].imag() * ghat[i].imag();
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double volume = 1.0;
    for (int d = 0; d < fhat.grid().dims(); ++d) volume *= fhat.grid().length();
    return sum / volume;
}

}  // namespace liouville
