#include "liouville/generate.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "liouville/rng.hpp"

namespace liouville {

Polynomial Polynomial::constant(double c) {
    return Polynomial({Term{c, {0, 0, 0}}});
}

Polynomial Polynomial::variable(int axis, double c) {
    Term t{c, {0, 0, 0}};
    t.exp[static_cast<std::size_t>(axis)] = 1;
    return Polynomial({t});
}

double Polynomial::operator()(const std::array<double, 3>& x) const {
    double sum = 0.0;
    for (const Term& t : terms_) {
        double m = t.coeff;
        for (int d = 0; d < 3; ++d) {
            for (int e = 0; e < t.exp[static_cast<std::size_t>(d)]; ++e) m *= x[static_cast<std::size_t>(d)];
        }
        sum += m;
    }
    return sum;
}

Polynomial Polynomial::derivative(int axis) const {
    std::vector<Term> out;
    for (const Term& t : terms_) {
        const int e = t.exp[static_cast<std::size_t>(axis)];
        if (e == 0) continue;
        Term d = t;
        d.coeff *= e;
        d.exp[static_cast<std::size_t>(axis)] = e - 1;
        out.push_back(d);
    }
    return Polynomial(std::move(out));
}

Polynomial Polynomial::times_variable(int axis) const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.exp[static_cast<std::size_t>(axis)] += 1;
    return Polynomial(std::move(out));
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    // merge like terms to keep repeated differentiation compact
    std::map<std::array<int, 3>, double> acc;
    for (const Term& t : terms_) acc[t.exp] += t.coeff;
    for (const Term& t : other.terms_) acc[t.exp] += t.coeff;
    terms_.clear();
    for (const auto& [exp, coeff] : acc) {
        if (coeff != 0.0) terms_.push_back(Term{coeff, exp});
    }
    return *this;
}

Polynomial Polynomial::operator*(double s) const {
    std::vector<Term> out = terms_;
    for (Term& t : out) t.coeff *= s;
    return Polynomial(std::move(out));
}

double GaussPoly::operator()(const std::array<double, 3>& x) const {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return poly(x) * std::exp(-r2 / (width * width));
}

GaussPoly GaussPoly::derivative(int axis) const {
    // d/dx_a [P e^{-r^2/w^2}] = (dP - (2/w^2) x_a P) e^{-r^2/w^2}
    Polynomial p = poly.derivative(axis);
    p += poly.times_variable(axis) * (-2.0 / (width * width));
    return GaussPoly{std::move(p), width};
}

GaussPoly GaussPoly::laplacian(int dims) const {
    GaussPoly out{Polynomial{}, width};
    for (int d = 0; d < dims; ++d) {
        out.poly += derivative(d).derivative(d).poly;
    }
    return out;
}

GeneratorSpec::Kind parse_kind(const std::string& name) {
    if (name == "stream2d") return GeneratorSpec::Kind::stream2d;
    if (name == "potential3d") return GeneratorSpec::Kind::potential3d;
    if (name == "random_divfree") return GeneratorSpec::Kind::random_divfree;
    throw std::invalid_argument("unknown generator kind: " + name);
}

std::string kind_name(GeneratorSpec::Kind kind) {
    switch (kind) {
        case GeneratorSpec::Kind::stream2d: return "stream2d";
        case GeneratorSpec::Kind::potential3d: return "potential3d";
        case GeneratorSpec::Kind::random_divfree: return "random_divfree";
    }
    return "?";
}

namespace {

Polynomial random_poly(Rng& rng, int dims, int max_degree) {
    std::vector<Polynomial::Term> terms;
    for (int e1 = 0; e1 <= max_degree; ++e1) {
        for (int e2 = 0; e2 + e1 <= max_degree; ++e2) {
            if (dims == 2) {
                const int deg = e1 + e2;
                terms.push_back({rng.normal() / (1.0 + deg), {e1, e2, 0}});
            } else {
                for (int e3 = 0; e3 + e2 + e1 <= max_degree; ++e3) {
                    const int deg = e1 + e2 + e3;
                    terms.push_back({rng.normal() / (1.0 + deg), {e1, e2, e3}});
                }
            }
        }
    }
    return Polynomial(std::move(terms));
}

Polynomial radial_poly(Rng& rng, double width) {
    // c0 + c1 (r/w)^2 + c2 (r/w)^4 in the plane: radial, so the momentum
    // tensor of the induced field is exactly isotropic.
    const double c0 = 1.0 + 0.5 * rng.normal();
    const double c1 = 0.5 * rng.normal();
    const double c2 = 0.15 * rng.normal();
    const double iw2 = 1.0 / (width * width);
    Polynomial r2(std::vector<Polynomial::Term>{{1.0, {2, 0, 0}}, {1.0, {0, 2, 0}}});
    Polynomial out = Polynomial::constant(c0);
    out += r2 * (c1 * iw2);
    Polynomial r4;
    for (const auto& a : r2.terms()) {
        for (const auto& b : r2.terms()) {
            std::array<int, 3> e{a.exp[0] + b.exp[0], a.exp[1] + b.exp[1], 0};
            r4 += Polynomial(std::vector<Polynomial::Term>{{a.coeff * b.coeff, e}});
        }
    }
    out += r4 * (c2 * iw2 * iw2);
    return out;
}

Polynomial shape_poly(const GeneratorSpec& spec, int dims) {
    Rng rng(spec.seed);
    if (spec.shape == "radial") return Polynomial::constant(1.0);
    if (spec.shape == "x1") return Polynomial::variable(0);
    if (spec.shape == "x1x2") return Polynomial(std::vector<Polynomial::Term>{{1.0, {1, 1, 0}}});
    if (spec.shape == "x4") {
        // angular harmonic of degree four: invariant under 90-degree
        // rotation, so the induced momentum tensor is isotropic for all time
        // under the flow
        return Polynomial(std::vector<Polynomial::Term>{
            {1.0, {4, 0, 0}}, {-6.0, {2, 2, 0}}, {1.0, {0, 4, 0}}});
    }
    if (spec.shape == "radial_poly") return radial_poly(rng, spec.width);
    if (spec.shape == "random") return random_poly(rng, dims, 3);
    throw std::invalid_argument("unknown generator shape: " + spec.shape);
}

void check_envelope(const GeneratorSpec& spec, const Grid& grid) {
    if (!(spec.width > 0.0)) throw std::invalid_argument("generator width must be positive");
    if (spec.width > grid.length() / 6.0) {
        throw std::invalid_argument("generator envelope too wide for the box (width > L/6)");
    }
}

}  // namespace

GaussPoly stream_function(const GeneratorSpec& spec) {
    Polynomial p = shape_poly(spec, 2);
    return GaussPoly{p * spec.amplitude, spec.width};
}

std::array<GaussPoly, 3> vector_potential(const GeneratorSpec& spec) {
    std::array<GaussPoly, 3> a{GaussPoly{Polynomial{}, spec.width},
                               GaussPoly{Polynomial{}, spec.width},
                               GaussPoly{Polynomial{}, spec.width}};
    if (spec.shape == "random") {
        Rng rng(spec.seed);
        for (int i = 0; i < 3; ++i) {
            a[static_cast<std::size_t>(i)].poly = random_poly(rng, 3, 2) * spec.amplitude;
        }
    } else {
        // planar shapes: A = (0, 0, psi)
        a[2].poly = shape_poly(spec, 3) * spec.amplitude;
    }
    return a;
}

VectorField gen_divfree(const GeneratorSpec& spec, const Grid& grid) {
    check_envelope(spec, grid);
    const bool want2d = spec.kind == GeneratorSpec::Kind::stream2d ||
                        (spec.kind == GeneratorSpec::Kind::random_divfree && grid.dims() == 2);
    if (want2d && grid.dims() != 2) {
        throw std::invalid_argument("stream2d generator needs a 2D grid");
    }
    if (!want2d && grid.dims() != 3) {
        throw std::invalid_argument("potential3d generator needs a 3D grid");
    }

    VectorField v(grid);
    if (want2d) {
        GeneratorSpec s = spec;
        if (spec.kind == GeneratorSpec::Kind::random_divfree) s.shape = "random";
        const GaussPoly psi = stream_function(s);
        const GaussPoly d1 = psi.derivative(0);
        const GaussPoly d2 = psi.derivative(1);
        for_each_point(grid, [&](std::size_t idx, const std::array<double, 3>& x) {
            v.comp(0)[idx] = -d2(x);
            v.comp(1)[idx] = d1(x);
        });
    } else {
        GeneratorSpec s = spec;
        if (spec.kind == GeneratorSpec::Kind::random_divfree) s.shape = "random";
        const auto a = vector_potential(s);
        const GaussPoly c0a = a[2].derivative(1);  // d2 A3
        const GaussPoly c0b = a[1].derivative(2);  // d3 A2
        const GaussPoly c1a = a[0].derivative(2);  // d3 A1
        const GaussPoly c1b = a[2].derivative(0);  // d1 A3
        const GaussPoly c2a = a[1].derivative(0);  // d1 A2
        const GaussPoly c2b = a[0].derivative(1);  // d2 A1
        for_each_point(grid, [&](std::size_t idx, const std::array<double, 3>& x) {
            v.comp(0)[idx] = c0a(x) - c0b(x);
            v.comp(1)[idx] = c1a(x) - c1b(x);
            v.comp(2)[idx] = c2a(x) - c2b(x);
        });
    }
    return v;
}

ScalarField gen_vorticity2d(const GeneratorSpec& spec, const Grid& grid) {
    check_envelope(spec, grid);
    if (grid.dims() != 2) throw std::invalid_argument("gen_vorticity2d needs a 2D grid");
    GeneratorSpec s = spec;
    if (spec.kind == GeneratorSpec::Kind::random_divfree) s.shape = "random";
    const GaussPoly omega = stream_function(s).laplacian(2);
    return ScalarField::sample(grid, [&](const std::array<double, 3>& x) { return omega(x); });
}

}  // namespace liouville
