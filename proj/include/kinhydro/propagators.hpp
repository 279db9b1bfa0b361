#pragma once

#include <Eigen/Dense>
#include <complex>

namespace kinhydro {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CMatrixRM = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense matrix exponential (scaling and squaring with Pade approximants).
CMatrix expm(const CMatrix& z);

/// e^Z, phi_1(Z) = Z^{-1}(e^Z - I) and phi_2(Z) = Z^{-2}(e^Z - I - Z), valid for singular Z.
struct PhiFunctions
{
  CMatrix exp;
  CMatrix phi1;
  CMatrix phi2;
};

/// Computed from the exponential of the augmented block matrix [[Z, I, 0], [0, 0, I], [0, 0, 0]].
PhiFunctions phi_functions(const CMatrix& z);

/// Largest singular value.
double operator_norm(const CMatrix& m);

}  // namespace kinhydro
