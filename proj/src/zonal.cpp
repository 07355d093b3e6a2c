#include "pinchlab/zonal.hpp"

namespace pinchlab {

void gegenbauer_row(double nu, int L, double c, std::vector<double>& out) {
    out.resize(L + 1);
    out[0] = 1.0;
    if (L == 0) return;
    out[1] = 2.0 * nu * c;
    for (int l = 2; l <= L; ++l)
        out[l] = (2.0 * (l + nu - 1.0) * c * out[l - 1] - (l + 2.0 * nu - 2.0) * out[l - 2]) / l;
}

void gegenbauer_row_deriv(double nu, int L, double c, std::vector<double>& out) {
    std::vector<double> up;
    gegenbauer_row(nu + 1.0, L > 0 ? L - 1 : 0, c, up);
    out.assign(L + 1, 0.0);
    for (int l = 1; l <= L; ++l) out[l] = 2.0 * nu * up[l - 1];
}

} // namespace pinchlab
