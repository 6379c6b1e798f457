// Brute-force reference computations used only by the tests.
//
// Nothing in here goes through the library's eigendecomposition helpers: Fock
// operators are Kronecker products of Jordan-Wigner matrices and exponentials
// come from Eigen's Padé/scaling-squaring MatrixFunctions.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat expm(const Mat& a) { return a.exp(); }

// Annihilator of mode j (0-based, lowest mode first) on L modes, with the
// Jordan-Wigner string over modes below j. Bit j of the basis index is the
// occupation of mode j, matching the library's Fock ordering.
inline Mat annihilator(int L, int j) {
    Mat z(2, 2), a(2, 2), id = Mat::Identity(2, 2);
    z << 1, 0, 0, -1;
    a << 0, 1, 0, 0;
    Mat out = Mat::Identity(1, 1);
    // kron(A, B) puts A on the high bits, so build from the top mode down
    for (int k = L - 1; k >= 0; --k) {
        const Mat& f = k == j ? a : (k < j ? z : id);
        Mat next = Eigen::kroneckerProduct(out, f).eval();
        out = next;
    }
    return out;
}

inline Mat second_quantize(const Eigen::MatrixXd& h) {
    const int L = static_cast<int>(h.rows());
    const long D = 1L << L;
    Mat out = Mat::Zero(D, D);
    std::vector<Mat> c;
    for (int j = 0; j < L; ++j) c.push_back(annihilator(L, j));
    for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
            if (h(i, j) != 0.0) out += h(i, j) * c[i].adjoint() * c[j];
    return out;
}

inline Mat number(int L) {
    Mat out = Mat::Zero(1L << L, 1L << L);
    for (int j = 0; j < L; ++j) {
        Mat c = annihilator(L, j);
        out += c.adjoint() * c;
    }
    return out;
}

inline Eigen::MatrixXd ring(int L, double hopping) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
    for (int j = 0; j < L; ++j) {
        h(j, (j + 1) % L) = -hopping / 2;
        h((j + 1) % L, j) = -hopping / 2;
    }
    return h;
}

// Grand-canonical lattice problem on the full Fock space.
struct ManyBody {
    Mat H0, H1, rho;
    double beta;

    ManyBody(int L, double g, double T, double mu, int site = 1) : beta(1.0 / T) {
        Eigen::MatrixXd h0 = ring(L, 1.0);
        Eigen::MatrixXd h1 = h0;
        h1(site - 1, site - 1) += g;
        H0 = second_quantize(h0);
        H1 = second_quantize(h1);
        Mat w = expm(-beta * (H0 - mu * number(L)));
        rho = w / w.trace();
    }

    // Tr[e^{iH0 t} e^{-iH1 t} rho]
    cd nu(double t) const {
        return (expm(cd(0, t) * H0) * expm(cd(0, -t) * H1) * rho).trace();
    }

    // Tr[U† e^{iuH0} U e^{-iuH0} rho] with U = e^{-iH1 tf}
    cd theta1(double tf, cd u) const {
        Mat U = expm(cd(0, -tf) * H1);
        return (U.adjoint() * expm(cd(0, 1) * u * H0) * U * expm(cd(0, -1) * u * H0) * rho).trace();
    }
};

// Σ_j p_j e^{i(V_n(E_j) - V_m(E_j)) t} for diagonal H_B and V.
inline cd static_noise(const std::vector<double>& energies, const std::vector<double>& vm,
                       const std::vector<double>& vn, double gm, double gn, double beta, double t) {
    cd acc = 0.0;
    double z = 0.0;
    for (std::size_t j = 0; j < energies.size(); ++j) {
        const double p = std::exp(-beta * energies[j]);
        z += p;
        acc += p * std::exp(cd(0, (gn * vn[j] - gm * vm[j]) * t));
    }
    return acc / z;
}

inline double binary_entropy(double p) {
    return -p * std::log(p) - (1 - p) * std::log(1 - p);
}

// Simple trapezoid on an even grid.
inline double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return s;
}

struct Fit {
    double slope;
    double r2;
};

inline Fit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double cov = n * sxy - sx * sy;
    const double vx = n * sxx - sx * sx;
    const double vy = n * syy - sy * sy;
    return {cov / vx, vy > 0 ? cov * cov / (vx * vy) : 1.0};
}

} // namespace oracle
