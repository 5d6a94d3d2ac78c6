#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {

/// Fourier coefficients on the wavenumber lattice k = 2*pi*m/L,
/// m in [-n/2, n/2)^N.
///
/// Storage mirrors the grid layout: index m_s in [0, n) per axis maps to the
/// signed mode m = m_s - n*(m_s >= n/2).  The forward transform convention is
///
///     fhat(k) = h^N * sum_x f(x) e^{-i k.x}
///
/// i.e. a Riemann-sum approximation of the continuum transform
/// integral f e^{-i xi.x} dx, so coefficients carry the physical scale.  The
/// inverse is the exact discrete inverse, f(x) = L^-N sum_k fhat(k) e^{i k.x}.
class SpectralField {
public:
    explicit SpectralField(const Grid& grid);

    const Grid& grid() const { return grid_; }

    std::complex<double>& operator[](std::size_t i) { return coeffs_[i]; }
    const std::complex<double>& operator[](std::size_t i) const { return coeffs_[i]; }

    std::span<std::complex<double>> coeffs() { return coeffs_; }
    std::span<const std::complex<double>> coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

    /// Signed integer mode for a storage index along one axis.
    int signed_mode(int storage_index) const;

    /// Physical wavenumber 2*pi*m/L for a storage index along one axis.
    double wavenumber(int storage_index) const;

private:
    Grid grid_;
    std::vector<std::complex<double>> coeffs_;
};

SpectralField to_spectral(const ScalarField& f);
ScalarField from_spectral(const SpectralField& fhat);

/// Visit every lattice point: flat index and physical wavevector
/// (k[2] = 0 for dims == 2).
void for_each_mode(const SpectralField& fhat,
                   const std::function<void(std::size_t, const std::array<double, 3>&)>& f);

/// Spectral derivative d/dx_axis: multiply by i*k_axis (Nyquist mode
/// dropped to keep real fields real).
ScalarField derivative(const ScalarField& f, int axis);
SpectralField derivative(const SpectralField& fhat, int axis);

/// sum_j d v^j / dx_j.
ScalarField divergence(const VectorField& v);

/// Orthogonal projection onto divergence-free fields:
/// vhat -> vhat - k (k.vhat)/|k|^2, zero mode passed through.
VectorField leray_project(const VectorField& v);

/// Direct non-uniform transform h^N sum_x f(x) e^{-i xi.x} at an arbitrary
/// frequency xi (not restricted to lattice wavenumbers).
std::complex<double> nudft(const ScalarField& f, const std::array<double, 3>& xi);

/// Batched variant: one grid pass for several fields at the same xi.
std::vector<std::complex<double>> nudft(std::span<const ScalarField* const> fields,
                                        const std::array<double, 3>& xi);

/// Zero all modes with any |m_i| > n/3 (the 2/3 anti-aliasing rule).
void dealias(SpectralField& fhat);

/// Exact trigonometric interpolation onto a grid with factor-times the
/// points (zero-padded spectrum).  Used to refine quadratures against
/// functions that are smooth but not band-limited.
ScalarField upsample(const ScalarField& f, int factor);

/// Exact integral of the trig interpolant over the centered ball |x| <= R,
/// evaluated in spectral space (no staircase error at the ball boundary).
double ball_integral(const SpectralField& fhat, double radius);

/// Parseval pairing L^-N sum_k fhat conj(ghat), real part.
double spectral_inner(const SpectralField& fhat, const SpectralField& ghat);

}  // namespace liouville
