#include "kinhydro/propagators.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "kinhydro/errors.hpp"

namespace kinhydro {

CMatrix expm(const CMatrix& z)
{
  CMatrix e = z.exp();
  if (!e.allFinite())
    throw NumericalAbort("matrix exponential produced non-finite entries");
  return e;
}

PhiFunctions phi_functions(const CMatrix& z)
{
  const Eigen::Index n = z.rows();
  CMatrix aug = CMatrix::Zero(3 * n, 3 * n);
  aug.topLeftCorner(n, n) = z;
  aug.block(0, n, n, n).setIdentity();
  aug.block(n, 2 * n, n, n).setIdentity();
  const CMatrix e = expm(aug);
  return {e.topLeftCorner(n, n), e.block(0, n, n, n), e.block(0, 2 * n, n, n)};
}

double operator_norm(const CMatrix& m)
{
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace kinhydro
