#include "feq/quadrature.hpp"

namespace feq {

namespace {

struct GL20 {
    std::array<double, 20> x{}, w{};
    GL20() {
        const int n = 20;
        for (int i = 0; i < n; ++i) {
            // Newton from the Chebyshev-like initial guess
            double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = t;
                for (int j = 2; j <= n; ++j) {
                    double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                    p0 = p1;
                    p1 = p2;
                }
                double dp = n * (t * p1 - p0) / (t * t - 1.0);
                double dt = p1 / dp;
                t -= dt;
                if (std::abs(dt) < 1e-16) break;
            }
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (t * p1 - p0) / (t * t - 1.0);
            x[i] = t;
            w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
        }
    }
};

const GL20& gl20_data() {
    static const GL20 g;
    return g;
}

} // namespace

const std::array<double, 20>& gl20_nodes() { return gl20_data().x; }
const std::array<double, 20>& gl20_weights() { return gl20_data().w; }

} // namespace feq
