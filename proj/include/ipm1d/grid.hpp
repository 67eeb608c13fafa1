#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace ipm1d {

using Spectrum = std::vector<std::complex<double>>;

/// Real-to-complex FFT of fixed size backed by FFTW. Plans are shared between
/// instances of the same size; transforms may run concurrently.
class Fft {
public:
    explicit Fft(int n);

    int size() const { return n_; }
    /// Unnormalised forward transform; returns n/2 + 1 coefficients.
    Spectrum forward(const std::vector<double>& samples) const;
    /// Inverse of forward (includes the 1/n factor).
    std::vector<double> inverse(const Spectrum& coeffs) const;

private:
    int n_;
    void* r2c_;
    void* c2r_;
};

/// Uniform samples of a real field on [-L, L) with nodes x_j = -L + j dx,
/// dx = 2L/n, n a power of two. The paired spectral coefficients are the
/// half-spectrum of the discrete transform; frequency index k corresponds to
/// xi_k = k / (2L) cycles per unit length.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(double half_width, int n);
    GridFunction(double half_width, std::vector<double> samples);

    static GridFunction sample(const std::function<double(double)>& f, double half_width, int n);
    static GridFunction from_spectrum(double half_width, int n, const Spectrum& coeffs);

    double half_width() const { return half_width_; }
    int size() const { return static_cast<int>(samples_.size()); }
    double dx() const { return 2.0 * half_width_ / size(); }
    double x(int j) const { return -half_width_ + j * dx(); }
    /// Index of the node at x = 0.
    int origin() const { return size() / 2; }
    double frequency(int k) const { return k / (2.0 * half_width_); }

    const std::vector<double>& samples() const { return samples_; }
    std::vector<double>& samples() { return samples_; }
    double operator[](int j) const { return samples_[j]; }

    Spectrum spectrum() const;
    double sup_norm() const;
    /// max |f(x_j) - f(-x_j)| over the grid.
    double even_defect() const;
    double edge_magnitude() const;

private:
    double half_width_ = 0.0;
    std::vector<double> samples_;
};

GridFunction operator*(double s, GridFunction g);
GridFunction operator+(GridFunction l, const GridFunction& r);

/// Spectral derivative (Nyquist mode dropped).
GridFunction derivative(const GridFunction& g);

bool is_power_of_two(int n);

} // namespace ipm1d
