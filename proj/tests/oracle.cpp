#include "liouville/grid.hpp"
#include "oracle.hpp"

namespace oracle {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, m, fa, flm, fm);
    const double right = simpson(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate1d(const std::function<double(double)>& f, double a, double b, double tol) {
    // fixed initial partition so localized mass cannot hide between the
    // first sample points
    constexpr int kPanels = 16;
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double pa = a + (b - a) * i / kPanels;
        const double pb = a + (b - a) * (i + 1) / kPanels;
        const double pm = 0.5 * (pa + pb);
        const double fa = f(pa);
        const double fm = f(pm);
        const double fb = f(pb);
        total += adaptive(f, pa, pb, fa, fm, fb, simpson(pa, pb, fa, fm, fb),
                          tol / kPanels, 24);
    }
    return total;
}

double integrate2d(const std::function<double(double, double)>& f, double a, double tol) {
    return integrate1d(
        [&](double x) {
            return integrate1d([&](double y) { return f(x, y); }, -a, a, tol * 0.05);
        },
        -a, a, tol);
}

}  // namespace oracle
