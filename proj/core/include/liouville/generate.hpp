#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "liouville/grid.hpp"

namespace liouville {

/// Polynomial in up to three variables, closed under differentiation.
class Polynomial {
public:
    struct Term {
        double coeff;
        std::array<int, 3> exp;
    };

    Polynomial() = default;
    explicit Polynomial(std::vector<Term> terms) : terms_(std::move(terms)) {}
    static Polynomial constant(double c);
    static Polynomial variable(int axis, double c = 1.0);

    double operator()(const std::array<double, 3>& x) const;
    Polynomial derivative(int axis) const;
    Polynomial times_variable(int axis) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial operator*(double s) const;

    const std::vector<Term>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

private:
    std::vector<Term> terms_;
};

/// P(x) * exp(-|x|^2 / w^2): the shape family used for all generated fields.
/// Closed under differentiation, so velocity components of stream/potential
/// constructions are sampled from exact symbolic derivatives.
struct GaussPoly {
    Polynomial poly;
    double width = 1.0;

    double operator()(const std::array<double, 3>& x) const;
    GaussPoly derivative(int axis) const;
    GaussPoly laplacian(int dims) const;
};

/// Recipe for a compactly supported divergence-free field.
struct GeneratorSpec {
    enum class Kind { stream2d, potential3d, random_divfree };

    Kind kind = Kind::stream2d;
    /// Gaussian envelope width w in exp(-|x|^2/w^2).  Must satisfy
    /// w <= L/6 on the target grid.
    double width = 1.0;
    /// Named polynomial shape: "radial", "x1", "x1x2", "x4" (the
    /// 90-degree-rotation-invariant quartic harmonic), "radial_poly"
    /// (seeded radial profile), "random" (seeded polynomial).
    std::string shape = "radial";
    std::uint64_t seed = 1;
    double amplitude = 1.0;
};

GeneratorSpec::Kind parse_kind(const std::string& name);
std::string kind_name(GeneratorSpec::Kind kind);

/// Stream function (2D kinds): v = (-d2 psi, d1 psi).
GaussPoly stream_function(const GeneratorSpec& spec);

/// Vector potential (3D kinds): v = curl A.
std::array<GaussPoly, 3> vector_potential(const GeneratorSpec& spec);

/// Sample the divergence-free field of `spec` on `grid`.  Throws if the
/// envelope does not fit the grid (width > L/6) or the kind does not match
/// the grid dimension.
VectorField gen_divfree(const GeneratorSpec& spec, const Grid& grid);

/// Scalar vorticity d1 v2 - d2 v1 of a 2D spec, sampled from the symbolic
/// Laplacian of the stream function.
ScalarField gen_vorticity2d(const GeneratorSpec& spec, const Grid& grid);

/// Relative tolerance used when checking that generated fields are
/// effectively supported inside radius L/3.
inline constexpr double kSupportTol = 1e-10;

}  // namespace liouville
