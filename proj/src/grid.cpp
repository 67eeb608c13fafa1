#include "ipm1d/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace ipm1d {

namespace {

struct Plans {
    fftw_plan r2c;
    fftw_plan c2r;
};

// The planner is not thread-safe; execution with the new-array interface is.
Plans plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, Plans> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second;
    }
    std::vector<double> real(n);
    std::vector<std::complex<double>> cplx(n / 2 + 1);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p{fftw_plan_dft_r2c_1d(n, real.data(), c, flags),
            fftw_plan_dft_c2r_1d(n, c, real.data(), flags | FFTW_DESTROY_INPUT)};
    cache.emplace(n, p);
    return p;
}

} // namespace

bool is_power_of_two(int n) { return n > 1 && (n & (n - 1)) == 0; }

Fft::Fft(int n) : n_(n) {
    if (!is_power_of_two(n)) {
        throw std::invalid_argument("FFT size must be a power of two");
    }
    const Plans p = plans_for(n);
    r2c_ = p.r2c;
    c2r_ = p.c2r;
}

Spectrum Fft::forward(const std::vector<double>& samples) const {
    if (static_cast<int>(samples.size()) != n_) {
        throw std::invalid_argument("FFT input has the wrong length");
    }
    std::vector<double> in(samples);
    Spectrum out(n_ / 2 + 1);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), in.data(),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> Fft::inverse(const Spectrum& coeffs) const {
    if (static_cast<int>(coeffs.size()) != n_ / 2 + 1) {
        throw std::invalid_argument("inverse FFT input has the wrong length");
    }
    Spectrum in(coeffs);
    std::vector<double> out(n_);
    fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(in.data()),
                         out.data());
    const double scale = 1.0 / n_;
    for (double& v : out) {
        v *= scale;
    }
    return out;
}

GridFunction::GridFunction(double half_width, int n) : half_width_(half_width), samples_(n, 0.0) {
    if (!(half_width > 0.0) || !is_power_of_two(n)) {
        throw std::invalid_argument("grid needs a positive half-width and power-of-two resolution");
    }
}

GridFunction::GridFunction(double half_width, std::vector<double> samples)
    : half_width_(half_width), samples_(std::move(samples)) {
    if (!(half_width > 0.0) || !is_power_of_two(static_cast<int>(samples_.size()))) {
        throw std::invalid_argument("grid needs a positive half-width and power-of-two resolution");
    }
}

GridFunction GridFunction::sample(const std::function<double(double)>& f, double half_width, int n) {
    GridFunction g(half_width, n);
    for (int j = 0; j < n; ++j) {
        g.samples_[j] = f(g.x(j));
    }
    return g;
}

GridFunction GridFunction::from_spectrum(double half_width, int n, const Spectrum& coeffs) {
    return GridFunction(half_width, Fft(n).inverse(coeffs));
}

Spectrum GridFunction::spectrum() const { return Fft(size()).forward(samples_); }

double GridFunction::sup_norm() const {
    double m = 0.0;
    for (double v : samples_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double GridFunction::even_defect() const {
    const int n = size();
    double m = 0.0;
    for (int j = 1; j < n; ++j) {
        m = std::max(m, std::abs(samples_[j] - samples_[n - j]));
    }
    return m;
}

double GridFunction::edge_magnitude() const {
    return std::max(std::abs(samples_.front()), std::abs(samples_.back()));
}

GridFunction operator*(double s, GridFunction g) {
    for (double& v : g.samples()) {
        v *= s;
    }
    return g;
}

GridFunction operator+(GridFunction l, const GridFunction& r) {
    if (l.size() != r.size() || l.half_width() != r.half_width()) {
        throw std::invalid_argument("grid functions live on different grids");
    }
    for (int j = 0; j < l.size(); ++j) {
        l.samples()[j] += r[j];
    }
    return l;
}

GridFunction derivative(const GridFunction& g) {
    Spectrum s = g.spectrum();
    const int nyq = g.size() / 2;
    for (int k = 0; k <= nyq; ++k) {
        s[k] *= std::complex<double>(0.0, 2.0 * std::numbers::pi * g.frequency(k));
    }
    s[nyq] = 0.0;
    return GridFunction::from_spectrum(g.half_width(), g.size(), s);
}

} // namespace ipm1d
