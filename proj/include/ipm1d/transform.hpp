#pragma once

#include "ipm1d/grid.hpp"
#include "ipm1d/quadrature.hpp"
#include "ipm1d/testfunctions.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ipm1d {

struct TransformParams {
    double a = 1.0;
    double g = 1.0;

    void validate() const;
};

using quad::IntegralResult;
using quad::QuadratureSpec;

// Every route integrates out to distance truncation_radius from x (or to where
// the profile's tail envelope drops below 1e-17, if nearer) and adds an
// analytic bound for the remainder to the error estimate.

/// Defining principal value (1/pi) PV int a^2 f(y) / ((x-y)((x-y)^2+a^2)) dy.
IntegralResult ha_pv(const TestFunction& f, const TransformParams& p, double x,
                     const QuadratureSpec& spec = {});

/// Even-symmetry half-line form. Requires an even f; the removable singularity
/// at y = x is handled by a window of half-width min(1e-3, x/2) and the limit
/// value -f'(x)/(2 a^2 x) of the integrand. For |x| < 1e-3 the odd quintic
/// through the values at 1e-3, 2e-3, 3e-3 is returned instead.
IntegralResult ha_even(const TestFunction& f, const TransformParams& p, double x,
                       const QuadratureSpec& spec = {});

/// (1/pi) int log(|x-y| / sqrt((x-y)^2 + a^2)) f'(y) dy, log singularity
/// removed by y = x +- u^2.
IntegralResult ha_logkernel(const TestFunction& f, const TransformParams& p, double x,
                            const QuadratureSpec& spec = {});

/// Two-term split into a local log integral over (0, 2x) and a difference
/// integral over (x, inf). Requires an even f. Small |x| as for ha_even.
IntegralResult ha_split(const TestFunction& f, const TransformParams& p, double x,
                        const QuadratureSpec& spec = {});

/// Fourier symbol of H_a: -i sgn(xi) (1 - exp(-2 pi a |xi|)).
std::complex<double> multiplier(double xi, double a);

/// Symbol sampled at the non-negative frequencies of a grid (r2c layout).
/// The Nyquist entry is zeroed so that odd operators keep real output.
///
/// Multiplying by the symbol convolves with the periodised kernel, whose
/// images at distance 2Ln add roughly a^2 x mass / (L^4) to the line
/// transform. The table also stores the image sums of the kernel and its first
/// two derivatives at every node so that this can be subtracted through the
/// zeroth to second moments of the input.
class MultiplierTable {
public:
    MultiplierTable(double half_width, int n, double a);

    const std::vector<double>& frequencies() const { return xi_; }
    const std::vector<std::complex<double>>& values() const { return m_; }
    void apply(Spectrum& s) const;
    /// Subtracts the image contribution of `input` from `output` in place.
    void remove_images(const GridFunction& input, GridFunction& output) const;

private:
    std::vector<double> xi_;
    std::vector<std::complex<double>> m_;
    std::vector<double> s0_;
    std::vector<double> s1_;
    std::vector<double> s2_;
};

struct GridTransform {
    GridFunction values;
    std::vector<std::string> warnings;
};

/// H_a applied spectrally on the periodic grid, with the periodic-image
/// correction unless disabled. Warns when the input does not decay to 1e-12
/// (relative to max(1, sup)) at the domain edges.
GridTransform ha_grid(const GridFunction& u, const TransformParams& p,
                      bool image_correction = true);

enum class Route { PV, Even, LogKernel, Split };
std::string to_string(Route r);
Route parse_route(const std::string& name);
IntegralResult ha(Route r, const TestFunction& f, const TransformParams& p, double x,
                  const QuadratureSpec& spec = {});

/// (x^2 + 3y^2 + a^2) / ((x^2 - y^2)((x-y)^2 + a^2)((x+y)^2 + a^2)) and its
/// closed-form partial derivatives; for x, y > 0, x != y, dy > 0 and dx < 0.
double even_kernel(double x, double y, double a);
double even_kernel_dy(double x, double y, double a);
double even_kernel_dx(double x, double y, double a);

/// log(|x| / sqrt(x^2 + a^2)) and its derivative a^2 / (x (x^2 + a^2)).
double log_kernel(double x, double a);
double log_kernel_dx(double x, double a);

} // namespace ipm1d
