#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace eqlab::hilbert {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using CDense = Eigen::MatrixXcd;
using RDense = Eigen::MatrixXd;
using CSparse = Eigen::SparseMatrix<cplx>;
using RSparse = Eigen::SparseMatrix<double>;
using CTriplet = Eigen::Triplet<cplx>;
using RTriplet = Eigen::Triplet<double>;

inline constexpr cplx kI{0.0, 1.0};

}  // namespace eqlab::hilbert
